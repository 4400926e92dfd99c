"""Named, parameter-complete experiment presets and their outcome checks.

Seven reference cases cover the long-run behavior of both modes under the
boundary-signal families (matched/unmatched, converging/diverging), all on
the same closed-form initial data, N = 200 and a horizon of 50 time units.
A manufactured-solution harness verifies the scheme's convergence orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import diagnostics, solver
from .kernels import Forcing
from .model import (
    MODE_EPS_POSITIVE,
    MODE_EPS_ZERO,
    BoundarySignal,
    BoundarySpec,
    ModelParams,
    State,
)
from .solver import SchemeConfig, Trajectory, make_grid

PRESET_NAMES = (
    "eps07_case1",
    "eps07_case2",
    "eps07_case3",
    "eps07_case4",
    "eps0_case1",
    "eps0_case2",
    "eps0_case3",
)

MMS_N_VALUES = (50, 100, 200, 400)

# sup-norm tolerance for "reaches the steady state" checks
STEADY_TOL = 5e-2
# residual threshold certifying near-stationarity
RESIDUAL_TOL = 1e-2
# separation margin for "steady state differs from the interpolant" checks;
# the tightest true separation among the shipped cases is 1.90e-2 (diffusive
# case 3, cross-checked against an independent steady-state BVP solve), so
# the margin sits below it but three orders above discretization error
AWAY_MARGIN = 1.5e-2


@dataclass(frozen=True)
class InitialData:
    """Closed-form initial fields.

    sine_squared: u = 0.3 + 0.1 sin^2(2 pi x), v = 0.2 sin^2(2 pi x)
    constant:     u = u_value, v = v_value
    manufactured: the manufactured solution at t = 0
    """

    kind: str
    u_value: float = 0.0
    v_value: float = 0.0

    def build(self, grid, manufactured=None) -> State:
        x = grid.nodes
        if self.kind == "sine_squared":
            s2 = np.sin(2.0 * math.pi * x) ** 2
            return State(u=0.3 + 0.1 * s2, v=0.2 * s2, t=0.0)
        if self.kind == "constant":
            return State(
                u=np.full(grid.n_nodes, self.u_value),
                v=np.full(grid.n_nodes, self.v_value),
                t=0.0,
            )
        if self.kind == "manufactured":
            if manufactured is None:
                raise ValueError("manufactured initial data need a manufactured solution")
            return State(u=manufactured.u_exact(x, 0.0), v=manufactured.v_exact(x, 0.0), t=0.0)
        raise ValueError(f"unknown initial-data kind {self.kind!r}")


@dataclass(frozen=True)
class Expectation:
    """One declarative outcome check, evaluated on a finished trajectory.

    kinds:
      steady_u / steady_v  sup distance of the final field from the linear
                           profile through `target` is at most `tol`
      steady_v_mean        final v stays within `tol` of the conserved mean
      away_pair            residual certifies stationarity while the pair
                           sits farther than `margin` from the named
                           (u_target, v_target) interpolants
      away_u               same, u component only
      away_v_mean          v is stationary but farther than `margin` from
                           the conserved mean
      diverging_v          sup|v| strictly grows between t_end/2 and t_end
      mms_error            final error against the manufactured fields is
                           at most bound_coef * (dx^2 + dt)
    """

    kind: str
    u_target: tuple | None = None
    v_target: tuple | None = None
    tol: float = STEADY_TOL
    margin: float = AWAY_MARGIN
    residual_component: str = "both"
    residual_tol: float = RESIDUAL_TOL
    bound_coef: float = 0.0

    @property
    def name(self) -> str:
        return self.kind


@dataclass(frozen=True)
class ExpectationResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: {self.detail}"


@dataclass(frozen=True)
class VerdictReport:
    scenario: str
    results: tuple

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self):
        out = [r.line() for r in self.results]
        out.append(
            f"{self.scenario}: all expectations passed"
            if self.all_passed
            else f"{self.scenario}: {sum(not r.passed for r in self.results)} expectation(s) failed"
        )
        return out


@dataclass(frozen=True)
class ManufacturedSolution:
    """Smooth space-time fields with analytically derived source terms.

    u* = 0.5 + 0.1 sin(2 pi x) exp(-t),  v* = 0.1 cos(2 pi x) exp(-t).
    The boundary traces fit the signal family exactly (u* is 0.5 at both
    endpoints; v* is 0.1 exp(-t) at both), so no special boundary handling
    is needed.
    """

    epsilon: float

    def u_exact(self, x, t):
        return 0.5 + 0.1 * np.sin(2.0 * math.pi * x) * math.exp(-t)

    def v_exact(self, x, t):
        return 0.1 * np.cos(2.0 * math.pi * x) * math.exp(-t)

    def boundary(self) -> BoundarySpec:
        alpha = BoundarySignal.constant(0.5)
        beta = BoundarySignal.exp_decay(0.0, 0.1, 1.0)
        return BoundarySpec(alpha1=alpha, alpha2=alpha, beta1=beta, beta2=beta)

    def forcing(self, grid) -> Forcing:
        """Source terms f = f1(x) e^{-t} + f2(x) e^{-2t} obtained by
        substituting the exact fields into the semi-discrete equations."""
        w = 2.0 * math.pi
        x = grid.nodes
        s = np.sin(w * x)
        c2 = np.cos(w * x)
        s4 = np.sin(2.0 * w * x)
        c4 = np.cos(2.0 * w * x)
        e = self.epsilon
        return Forcing(
            fu1=s * (0.1 * w * w + 0.05 * w - 0.1),
            fu2=-0.01 * w * c4,
            fv1=c2 * (0.1 * e * w * w - 0.1 * w - 0.1),
            fv2=0.01 * e * w * s4,
            r1=1.0,
            r2=2.0,
        )

    def error(self, s: State) -> float:
        x = np.linspace(0.0, 1.0, s.u.shape[0])
        du = np.max(np.abs(s.u - self.u_exact(x, s.t)))
        dv = np.max(np.abs(s.v - self.v_exact(x, s.t)))
        return float(max(du, dv))


@dataclass(frozen=True)
class Scenario:
    """A named run: configuration, initial data, sampling instants, and
    declarative outcome checks."""

    name: str
    cfg: SchemeConfig
    initial: InitialData
    samples: tuple
    expectations: tuple
    manufactured: ManufacturedSolution | None = None

    def build_initial(self) -> State:
        return self.initial.build(self.cfg.grid, self.manufactured)

    def run(self, backend: str | None = None) -> Trajectory:
        return solver.run(self.cfg, self.build_initial(), self.samples, backend=backend)

    def with_overrides(self, t_end: float | None = None, n_cells: int | None = None) -> "Scenario":
        """Same scenario on a different horizon and/or mesh.  A new horizon
        replaces the sampling plan with a fresh uniform diagnostic grid."""
        cfg = self.cfg
        samples = self.samples
        if n_cells is not None:
            cfg = replace(cfg, grid=make_grid(cfg.params.epsilon, n_cells))
        if t_end is not None and t_end != cfg.t_end:
            cfg = replace(cfg, t_end=t_end)
            samples = _with_uniform_grid((), t_end)
        return replace(self, cfg=cfg, samples=samples)


def _with_uniform_grid(figure_times, t_end, points: int = 100):
    """Figure times plus a uniform diagnostic grid of `points` instants."""
    ts = set(float(t) for t in figure_times)
    stride = t_end / points
    ts.update(k * stride for k in range(1, points + 1))
    return tuple(sorted(ts))


def _exp07(c):
    return BoundarySignal.exp_decay(c, 1.0, 200000.0)


_CASE_TABLE = {
    "eps07_case1": dict(
        epsilon=0.7,
        alpha1=_exp07(0.7),
        alpha2=_exp07(0.7),
        beta1=BoundarySignal.rational_decay(0.3, 1.0, 10000.0),
        beta2=BoundarySignal.rational_decay(0.3, 4.0, 1000.0),
        figure_times=(0.168, 49.9),
        expectations=(
            Expectation(kind="steady_u", u_target=(0.7, 0.7)),
            Expectation(kind="steady_v", v_target=(0.3, 0.3)),
        ),
    ),
    "eps07_case2": dict(
        epsilon=0.7,
        alpha1=_exp07(0.7),
        alpha2=BoundarySignal.exp_decay(0.7, 1.0, 20.0),
        beta1=BoundarySignal.rational_decay(0.3, 1.0, 10000.0),
        beta2=BoundarySignal.rational_decay(0.3, 4.0, 1000.0),
        figure_times=(0.144, 49.99),
        expectations=(
            Expectation(kind="steady_u", u_target=(0.7, 0.7)),
            Expectation(kind="steady_v", v_target=(0.3, 0.3)),
        ),
    ),
    "eps07_case3": dict(
        epsilon=0.7,
        alpha1=_exp07(0.7),
        alpha2=_exp07(0.7),
        beta1=BoundarySignal.rational_decay(0.5, 1.0, 10000.0),
        beta2=BoundarySignal.rational_decay(0.3, 4.0, 1000.0),
        figure_times=(0.096, 49.9),
        expectations=(
            Expectation(kind="away_pair", u_target=(0.7, 0.7), v_target=(0.5, 0.3)),
        ),
    ),
    "eps07_case4": dict(
        epsilon=0.7,
        alpha1=_exp07(0.7),
        alpha2=BoundarySignal.exp_decay(0.4, 1.0, 200000.0),
        beta1=BoundarySignal.rational_decay(0.5, 1.0, 10000.0),
        beta2=BoundarySignal.rational_decay(0.3, 4.0, 1000.0),
        figure_times=(8.7, 49.9),
        expectations=(
            Expectation(kind="away_pair", u_target=(0.7, 0.4), v_target=(0.5, 0.3)),
        ),
    ),
    "eps0_case1": dict(
        epsilon=0.0,
        alpha1=_exp07(0.3),
        alpha2=_exp07(0.3),
        beta1=BoundarySignal.constant(0.0),
        beta2=BoundarySignal.constant(0.0),
        figure_times=(0.036, 1.2, 8.4, 49.99),
        expectations=(
            Expectation(kind="steady_u", u_target=(0.3, 0.3)),
            Expectation(kind="steady_v_mean"),
        ),
    ),
    "eps0_case2": dict(
        epsilon=0.0,
        alpha1=BoundarySignal.exp_decay(0.3, -1.0, 200000.0),
        alpha2=BoundarySignal.rational_decay(0.3, 1.0, 200.0),
        beta1=BoundarySignal.constant(0.0),
        beta2=BoundarySignal.constant(0.0),
        figure_times=(0.036, 0.168, 3.576, 49.92),
        expectations=(
            Expectation(kind="steady_u", u_target=(0.3, 0.3)),
            Expectation(kind="away_v_mean", residual_component="v"),
        ),
    ),
    "eps0_case3": dict(
        epsilon=0.0,
        alpha1=_exp07(0.7),
        alpha2=_exp07(0.3),
        beta1=BoundarySignal.constant(0.0),
        beta2=BoundarySignal.constant(0.0),
        figure_times=(0.072, 0.372, 0.612, 49.99),
        expectations=(
            Expectation(kind="away_u", u_target=(0.7, 0.3), residual_component="u"),
            Expectation(kind="diverging_v"),
        ),
    ),
}


def preset(name: str, t_end: float = 50.0, n_cells: int = 200) -> Scenario:
    """One of the seven built-in reference cases, fully populated."""
    if name not in _CASE_TABLE:
        raise KeyError(f"unknown scenario {name!r}; valid names: {', '.join(PRESET_NAMES)}")
    row = _CASE_TABLE[name]
    epsilon = row["epsilon"]
    mode = MODE_EPS_POSITIVE if epsilon > 0.0 else MODE_EPS_ZERO
    cfg = SchemeConfig(
        mode=mode,
        grid=make_grid(epsilon, n_cells),
        params=ModelParams(epsilon=epsilon),
        boundary=BoundarySpec(
            alpha1=row["alpha1"], alpha2=row["alpha2"], beta1=row["beta1"], beta2=row["beta2"]
        ),
        t_end=t_end,
    )
    return Scenario(
        name=name,
        cfg=cfg,
        initial=InitialData(kind="sine_squared"),
        samples=_with_uniform_grid(tuple(t for t in row["figure_times"] if t <= t_end), t_end),
        expectations=row["expectations"],
    )


# empirical constant for the manufactured-error bound: measured
# err/(dx^2 + dt) is 0.15 (diffusive) and 3.70 (non-diffusive) across
# N in {50..400}; 8.0 leaves slack without letting a broken stencil
# through (a first-order defect would push the ratio past 50 at N=200)
MMS_BOUND_COEF = 8.0


def mms_preset(n_cells: int, mode: str, dt: float | None = None, t_end: float = 1.0) -> Scenario:
    """Manufactured-solution run: exact fields injected as forcing, error
    against them checked at t_end."""
    if n_cells not in MMS_N_VALUES:
        raise solver.ConfigurationError(
            f"manufactured runs support n_cells in {MMS_N_VALUES}, got {n_cells}"
        )
    epsilon = 0.7 if mode == MODE_EPS_POSITIVE else 0.0
    grid = make_grid(epsilon, n_cells, dt=dt)
    ms = ManufacturedSolution(epsilon=epsilon)
    cfg = SchemeConfig(
        mode=mode,
        grid=grid,
        params=ModelParams(epsilon=epsilon),
        boundary=ms.boundary(),
        t_end=t_end,
        forcing=ms.forcing(grid),
    )
    return Scenario(
        name=f"mms_{mode}_n{n_cells}",
        cfg=cfg,
        initial=InitialData(kind="manufactured"),
        samples=(t_end,),
        expectations=(Expectation(kind="mms_error", bound_coef=MMS_BOUND_COEF),),
        manufactured=ms,
    )


@dataclass(frozen=True)
class OrderStudy:
    """Errors and observed convergence orders across a refinement ladder."""

    label: str
    resolutions: tuple
    errors: tuple
    orders: tuple


def spatial_order_study(
    mode: str,
    n_values=(50, 100, 200),
    dt: float = 2.5e-6,
    t_end: float = 0.25,
    backend: str | None = None,
) -> OrderStudy:
    """Error against the manufactured fields under grid doubling at a fixed
    small dt (small enough that the first-order time error stays far below
    the second-order space error on the finest grid)."""
    errors = []
    for n in n_values:
        scn = mms_preset(n, mode, dt=dt, t_end=t_end)
        traj = scn.run(backend=backend)
        errors.append(scn.manufactured.error(traj.final_state()))
    orders = tuple(
        math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)
    )
    return OrderStudy(
        label=f"spatial_{mode}", resolutions=tuple(n_values), errors=tuple(errors), orders=orders
    )


def temporal_order_study(
    mode: str,
    n_cells: int = 100,
    t_end: float = 0.05,
    ref_refine: int = 16,
    backend: str | None = None,
) -> OrderStudy:
    """Error under dt halving at a fixed grid, measured against a run with
    dt/ref_refine on the same grid so the spatial error cancels and the
    first-order time error is isolated."""
    dx = 1.0 / n_cells
    dt0 = dx * dx / 2.0
    final = {}
    for divisor in (1, 2, ref_refine):
        scn = mms_preset(n_cells, mode, dt=dt0 / divisor, t_end=t_end)
        final[divisor] = scn.run(backend=backend).final_state()
    ref = final[ref_refine]
    errors = []
    for divisor in (1, 2):
        s = final[divisor]
        errors.append(
            float(
                max(
                    np.max(np.abs(s.u - ref.u)),
                    np.max(np.abs(s.v - ref.v)),
                )
            )
        )
    orders = (math.log2(errors[0] / errors[1]),)
    return OrderStudy(
        label=f"temporal_{mode}",
        resolutions=(1, 2),
        errors=tuple(errors),
        orders=orders,
    )


def _profile(target, n_nodes):
    x = np.linspace(0.0, 1.0, n_nodes)
    return (target[1] - target[0]) * x + target[0]


def evaluate_expectations(scn: Scenario, traj: Trajectory) -> VerdictReport:
    """Check every declared expectation against a finished trajectory."""
    final = traj.final_state()
    n_nodes = final.u.shape[0]
    results = []
    for exp in scn.expectations:
        if exp.kind == "steady_u":
            measured = float(np.max(np.abs(final.u - _profile(exp.u_target, n_nodes))))
            passed = measured <= exp.tol
            detail = f"sup|u - target| = {measured:.3e} (tol {exp.tol:g}) at t = {final.t:g}"
            threshold = exp.tol
        elif exp.kind == "steady_v":
            measured = float(np.max(np.abs(final.v - _profile(exp.v_target, n_nodes))))
            passed = measured <= exp.tol
            detail = f"sup|v - target| = {measured:.3e} (tol {exp.tol:g}) at t = {final.t:g}"
            threshold = exp.tol
        elif exp.kind == "steady_v_mean":
            measured = float(np.max(np.abs(final.v - traj.v_bar)))
            passed = measured <= exp.tol
            detail = f"sup|v - v_bar| = {measured:.3e} (tol {exp.tol:g}, v_bar = {traj.v_bar:g})"
            threshold = exp.tol
        elif exp.kind in ("away_pair", "away_u", "away_v_mean"):
            residual = diagnostics.steady_state_residual(final, scn.cfg, exp.residual_component)
            if exp.kind == "away_pair":
                dist = max(
                    float(np.max(np.abs(final.u - _profile(exp.u_target, n_nodes)))),
                    float(np.max(np.abs(final.v - _profile(exp.v_target, n_nodes)))),
                )
            elif exp.kind == "away_u":
                dist = float(np.max(np.abs(final.u - _profile(exp.u_target, n_nodes))))
            else:
                dist = float(np.max(np.abs(final.v - traj.v_bar)))
            passed = residual <= exp.residual_tol and dist > exp.margin
            measured = dist
            threshold = exp.margin
            detail = (
                f"residual = {residual:.3e} (tol {exp.residual_tol:g}), "
                f"distance from named profile = {dist:.3e} (margin {exp.margin:g})"
            )
        elif exp.kind == "diverging_v":
            t_mid = scn.cfg.t_end / 2.0
            s_mid = traj.state_at(t_mid)
            m_end = float(np.max(np.abs(final.v)))
            m_mid = float(np.max(np.abs(s_mid.v)))
            passed = m_end > m_mid
            measured = m_end
            threshold = m_mid
            detail = f"sup|v|(t={final.t:g}) = {m_end:.3e} vs sup|v|(t={s_mid.t:g}) = {m_mid:.3e}"
        elif exp.kind == "mms_error":
            bound = exp.bound_coef * (scn.cfg.grid.dx ** 2 + scn.cfg.grid.dt)
            measured = scn.manufactured.error(final)
            passed = measured <= bound
            threshold = bound
            detail = f"error vs manufactured fields = {measured:.3e} (bound {bound:.3e})"
        else:
            raise ValueError(f"unknown expectation kind {exp.kind!r}")
        results.append(
            ExpectationResult(
                name=exp.name, passed=passed, measured=measured, threshold=threshold, detail=detail
            )
        )
    return VerdictReport(scenario=scn.name, results=tuple(results))
