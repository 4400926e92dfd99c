"""Explicit finite-difference time integration.

Forward Euler with conservative central differences of the fluxes (uv) and
(v^2), dt = dx^2/2 by default, Dirichlet endpoints imposed at the new time
level after the interior sweep.  In the non-diffusive mode the v endpoints
are advanced with the one-sided transport rate built from the pre-step u.

Times live on the step lattice t = n*dt (recomputed as a product, never
accumulated), so trajectories are reproducible bit for bit and independent
of how a run is split into kernel calls.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics, kernels
from .kernels import Forcing
from .model import (
    MODE_EPS_POSITIVE,
    MODE_EPS_ZERO,
    MODES,
    SIGNAL_CODES,
    BoundarySpec,
    Grid,
    ModelParams,
    State,
    characteristic_speeds,
)
from .stencils import trapezoid

MODE_CODES = {MODE_EPS_POSITIVE: 0, MODE_EPS_ZERO: 1}
COMPAT_TOL = 1e-6


class ConfigurationError(ValueError):
    """A run configuration violates a mesh or parameter constraint."""


class SolverAbort(RuntimeError):
    """The integration stopped before reaching the horizon."""

    def __init__(self, message, *, time: float, node: int, trajectory=None):
        super().__init__(message)
        self.time = time
        self.node = node
        self.trajectory = trajectory


class PositivityLossError(SolverAbort):
    """The cell density u dropped to zero or below."""


class InstabilityError(SolverAbort):
    """A field became NaN or infinite."""


class CompatibilityWarning(UserWarning):
    """Initial data disagree with the boundary signals at t=0; the scheme
    overwrites the endpoints at the first step."""


class CourantWarning(UserWarning):
    """The advective Courant number exceeded the configured guard."""


def make_grid(epsilon: float, n_cells: int, dt: float | None = None) -> Grid:
    """Uniform mesh with dx = 1/n_cells and dt = dx^2/2 unless overridden.

    For epsilon > 0 the spatial mesh must satisfy dx < sqrt(epsilon/10) so
    numerical diffusion does not dominate the chemical diffusion; for
    epsilon = 0 that constraint is vacuous and only the parabolic timestep
    law applies.
    """
    if n_cells < 4:
        raise ConfigurationError(f"n_cells must be >= 4, got {n_cells}")
    if not epsilon >= 0.0:
        raise ConfigurationError(f"epsilon must be >= 0, got {epsilon}")
    dx = 1.0 / n_cells
    if epsilon > 0.0:
        limit = math.sqrt(epsilon / 10.0)
        if not dx < limit:
            raise ConfigurationError(
                f"spatial mesh constraint violated: dx = {dx:g} must be < "
                f"sqrt(epsilon/10) = {limit:g} (epsilon = {epsilon:g})"
            )
    if dt is None:
        dt = dx * dx / 2.0
    if not dt > 0.0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    return Grid(n_cells=n_cells, dx=dx, dt=dt, nodes=np.linspace(0.0, 1.0, n_cells + 1))


@dataclass(frozen=True)
class SchemeConfig:
    """Everything one run needs: mode, mesh, parameters, boundary signals,
    horizon, and the advective-Courant warning threshold."""

    mode: str
    grid: Grid
    params: ModelParams
    boundary: BoundarySpec
    t_end: float
    cfl_guard: float = 0.9
    forcing: Forcing | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown mode {self.mode!r}; valid: {MODES}")
        if self.mode == MODE_EPS_POSITIVE and not self.params.epsilon > 0.0:
            raise ConfigurationError("mode eps_positive requires epsilon > 0")
        if self.mode == MODE_EPS_ZERO and self.params.epsilon != 0.0:
            raise ConfigurationError("mode eps_zero requires epsilon = 0")
        if not self.t_end >= 0.0:
            raise ConfigurationError(f"t_end must be >= 0, got {self.t_end}")
        if not self.cfl_guard > 0.0:
            raise ConfigurationError(f"cfl_guard must be > 0, got {self.cfl_guard}")
        if self.params.epsilon > 0.0 and not self.grid.dx < math.sqrt(self.params.epsilon / 10.0):
            raise ConfigurationError(
                f"spatial mesh constraint violated: dx = {self.grid.dx:g} must be < "
                f"sqrt(epsilon/10) = {math.sqrt(self.params.epsilon / 10.0):g}"
            )
        if self.forcing is not None:
            for f in (self.forcing.fu1, self.forcing.fu2, self.forcing.fv1, self.forcing.fv2):
                if np.shape(f) != (self.grid.n_nodes,):
                    raise ConfigurationError("forcing arrays must match the grid nodes")
        # boundary cell density must stay positive at every imposed time
        # (the endpoints are first imposed at t = dt, never at t = 0)
        if self.n_steps_total > 0:
            t_last = self.n_steps_total * self.grid.dt
            for name, sig in (("alpha1", self.boundary.alpha1), ("alpha2", self.boundary.alpha2)):
                if not sig.lower_bound(self.grid.dt, t_last) > 0.0:
                    raise ConfigurationError(
                        f"{name} must stay positive over the run horizon; "
                        f"lower bound is {sig.lower_bound(self.grid.dt, t_last):g}"
                    )

    @property
    def n_steps_total(self) -> int:
        """Steps needed to reach t >= t_end on the lattice t = n*dt."""
        return max(0, math.ceil(self.t_end / self.grid.dt - 1e-9))


@dataclass(frozen=True)
class StepReport:
    """Per-step health monitor: exact largest characteristic speed over the
    nodes, the advective Courant number it implies, and the density floor."""

    max_char_speed: float
    advective_cfl: float
    u_min: float


def _kernel_call_args(cfg: SchemeConfig) -> dict:
    b = cfg.boundary
    p = cfg.params
    return dict(
        dt=cfg.grid.dt,
        dx=cfg.grid.dx,
        coef_sign=float(p.sign_chimu),
        coef_vxx=p.epsilon / p.D,
        coef_v2x=p.epsilon / p.chi,
        mode=MODE_CODES[cfg.mode],
        sig_kinds=np.array(
            [SIGNAL_CODES[s.kind] for s in (b.alpha1, b.alpha2, b.beta1, b.beta2)],
            dtype=np.int64,
        ),
        sig_params=np.array(
            [[s.c, s.a, s.k] for s in (b.alpha1, b.alpha2, b.beta1, b.beta2)],
            dtype=np.float64,
        ),
        forcing=cfg.forcing,
    )


def _lattice_index(t: float, dt: float) -> int:
    n = int(round(t / dt))
    if abs(n * dt - t) > 1e-12 * max(1.0, abs(t)):
        raise ConfigurationError(
            f"state time {t!r} does not sit on the step lattice (dt = {dt!r})"
        )
    return n


def _raise_abort(res: kernels.AdvanceResult, dt: float, trajectory=None):
    t_bad = res.bad_step * dt
    if res.status == kernels.POSITIVITY_LOSS:
        raise PositivityLossError(
            f"cell density lost positivity at node {res.bad_node}, t = {t_bad:g}",
            time=t_bad,
            node=res.bad_node,
            trajectory=trajectory,
        )
    raise InstabilityError(
        f"non-finite field value at node {res.bad_node}, t = {t_bad:g}",
        time=t_bad,
        node=res.bad_node,
        trajectory=trajectory,
    )


def _step(s: State, cfg: SchemeConfig, backend: str | None = None):
    grid = cfg.grid
    if s.u.shape[0] != grid.n_nodes:
        raise ConfigurationError("state length does not match the grid")
    n0 = _lattice_index(s.t, grid.dt)
    u = np.array(s.u)
    v = np.array(s.v)
    res = kernels.advance(u, v, n_steps=1, step0=n0, backend=backend, **_kernel_call_args(cfg))
    if res.status != kernels.OK:
        _raise_abort(res, grid.dt)
    lam_minus, lam_plus = characteristic_speeds(u, v, cfg.params)
    speed = float(max(np.max(np.abs(lam_minus)), np.max(np.abs(lam_plus))))
    report = StepReport(
        max_char_speed=speed,
        advective_cfl=speed * grid.dt / grid.dx,
        u_min=float(np.min(u)),
    )
    return State(u=u, v=v, t=(n0 + 1) * grid.dt), report


def step_eps_positive(s: State, cfg: SchemeConfig, backend: str | None = None):
    """One forward-Euler step of the diffusive system; returns the new
    state and its health report."""
    if cfg.mode != MODE_EPS_POSITIVE:
        raise ConfigurationError("step_eps_positive requires an eps_positive config")
    return _step(s, cfg, backend)


def step_eps_zero(s: State, cfg: SchemeConfig, backend: str | None = None):
    """One forward-Euler step of the non-diffusive system; the v endpoints
    evolve by the one-sided transport rate of the pre-step u."""
    if cfg.mode != MODE_EPS_ZERO:
        raise ConfigurationError("step_eps_zero requires an eps_zero config")
    return _step(s, cfg, backend)


@dataclass
class Trajectory:
    """Sampled output of one run: snapshots and diagnostics at t = 0 plus
    every requested instant (nearest step not exceeding it)."""

    cfg: SchemeConfig
    requested_times: tuple
    states: list[State] = field(default_factory=list)
    records: list = field(default_factory=list)
    v_bar: float | None = None
    max_speed_bound: float = 0.0
    max_cfl_bound: float = 0.0
    n_steps_total: int = 0

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.states]

    def final_state(self) -> State:
        return self.states[-1]

    def record_at(self, t: float):
        """The last record whose time does not exceed t (within rounding)."""
        best = None
        for r in self.records:
            if r.t <= t + 1e-9:
                best = r
        if best is None:
            raise KeyError(f"no record at or before t = {t}")
        return best

    def state_at(self, t: float) -> State:
        """The last snapshot whose time does not exceed t (within rounding)."""
        best = None
        for s in self.states:
            if s.t <= t + 1e-9:
                best = s
        if best is None:
            raise KeyError(f"no sampled state at or before t = {t}")
        return best


def run(cfg: SchemeConfig, init: State, samples=(), backend: str | None = None) -> Trajectory:
    """Advance init to t >= t_end, sampling at the requested instants.

    Returns the trajectory of (State, DiagnosticsRecord) pairs: one entry
    for t = 0 plus one per requested instant, each taken at the nearest
    step not exceeding the requested time.  Raises SolverAbort (with the
    partial trajectory attached) if positivity or finiteness fails.
    """
    grid = cfg.grid
    dt = grid.dt
    if init.u.shape[0] != grid.n_nodes:
        raise ConfigurationError("initial state length does not match the grid")
    if init.t != 0.0:
        raise ConfigurationError(f"initial state must have t = 0, got t = {init.t}")

    a1_0 = cfg.boundary.alpha1(0.0)
    a2_0 = cfg.boundary.alpha2(0.0)
    if abs(init.u[0] - a1_0) > COMPAT_TOL or abs(init.u[-1] - a2_0) > COMPAT_TOL:
        warnings.warn(
            f"initial u endpoints ({init.u[0]:g}, {init.u[-1]:g}) differ from the "
            f"boundary signals at t=0 ({a1_0:g}, {a2_0:g}); endpoints are "
            "overwritten at the first step",
            CompatibilityWarning,
            stacklevel=2,
        )

    n_total = cfg.n_steps_total
    sample_steps = []
    for t_req in samples:
        if t_req < 0.0:
            raise ConfigurationError(f"sample times must be >= 0, got {t_req}")
        sample_steps.append(min(int(math.floor(t_req / dt + 1e-9)), n_total))
    sample_steps.sort()

    traj = Trajectory(cfg=cfg, requested_times=tuple(samples), n_steps_total=n_total)
    traj.v_bar = trapezoid(init.v, grid.dx) if cfg.mode == MODE_EPS_ZERO else None

    u = np.array(init.u)
    v = np.array(init.v)
    call_args = _kernel_call_args(cfg)

    def emit(step: int):
        s = State(u=u, v=v, t=step * dt)
        traj.states.append(s)
        traj.records.append(diagnostics.compute_record(s, cfg, traj.v_bar))

    emit(0)
    current = 0
    for target in sample_steps:
        if target > current:
            res = kernels.advance(
                u, v, n_steps=target - current, step0=current, backend=backend, **call_args
            )
            traj.max_speed_bound = max(traj.max_speed_bound, res.max_speed)
            if res.status != kernels.OK:
                emit(res.bad_step - 1)
                traj.max_cfl_bound = traj.max_speed_bound * dt / grid.dx
                _raise_abort(res, dt, traj)
            current = target
        emit(current)
    if n_total > current:
        res = kernels.advance(
            u, v, n_steps=n_total - current, step0=current, backend=backend, **call_args
        )
        traj.max_speed_bound = max(traj.max_speed_bound, res.max_speed)
        if res.status != kernels.OK:
            emit(res.bad_step - 1)
            traj.max_cfl_bound = traj.max_speed_bound * dt / grid.dx
            _raise_abort(res, dt, traj)

    traj.max_cfl_bound = traj.max_speed_bound * dt / grid.dx
    if traj.max_cfl_bound > cfg.cfl_guard:
        warnings.warn(
            f"advective Courant bound {traj.max_cfl_bound:g} exceeded the guard "
            f"{cfg.cfl_guard:g} during the run",
            CourantWarning,
            stacklevel=2,
        )
    return traj
