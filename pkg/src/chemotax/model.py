"""State space, boundary-signal family, and Cole-Hopf machinery.

Variables follow the transformed chemotaxis system: ``u`` is the cell
density and ``v = c_x / c`` the logarithmic gradient of the chemical
concentration ``c``.  Everything here is immutable value data plus pure
functions; nothing in this module advances time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .stencils import difference_quotient

SIGNAL_KINDS = ("constant", "exp_decay", "rational_decay", "sinusoid")
# integer codes shared with the stepping kernels
SIGNAL_CODES = {kind: code for code, kind in enumerate(SIGNAL_KINDS)}

MODE_EPS_POSITIVE = "eps_positive"
MODE_EPS_ZERO = "eps_zero"
MODES = (MODE_EPS_POSITIVE, MODE_EPS_ZERO)


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class HyperbolicityLossError(ArithmeticError):
    """The advective characteristic speeds became complex."""


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the transformed system.

    ``epsilon`` is the chemical diffusivity; ``chi`` (chemotactic
    coefficient) and ``D`` (cell diffusivity) are 1 in all shipped runs;
    ``sign_chimu`` is the sign of the product of chemotactic and
    production coefficients (+1 keeps the advective part hyperbolic
    wherever u > 0).
    """

    epsilon: float
    chi: float = 1.0
    sign_chimu: int = 1
    D: float = 1.0

    def __post_init__(self):
        if not self.epsilon >= 0.0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.sign_chimu not in (-1, 1):
            raise DomainError(f"sign_chimu must be +1 or -1, got {self.sign_chimu}")
        if self.chi == 0.0:
            raise DomainError("chi must be nonzero")
        if not self.D > 0.0:
            raise DomainError(f"D must be > 0, got {self.D}")


@dataclass(frozen=True)
class Grid:
    """Uniform mesh of N+1 nodes on [0, 1] with its timestep."""

    n_cells: int
    dx: float
    dt: float
    nodes: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        if self.n_cells < 4:
            raise DomainError(f"n_cells must be >= 4, got {self.n_cells}")
        if self.dx != 1.0 / self.n_cells:
            raise DomainError("dx must equal 1/n_cells exactly")
        if not self.dt > 0.0:
            raise DomainError(f"dt must be > 0, got {self.dt}")
        object.__setattr__(self, "nodes", _readonly(self.nodes))

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1


@dataclass(frozen=True)
class State:
    """Nodal fields (u, v) at time t.  Arrays are copied and frozen."""

    u: np.ndarray = field(compare=False, repr=False)
    v: np.ndarray = field(compare=False, repr=False)
    t: float = 0.0

    def __post_init__(self):
        u = _readonly(self.u)
        v = _readonly(self.v)
        if u.ndim != 1 or u.shape != v.shape:
            raise DomainError("u and v must be 1-D arrays of identical length")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise DomainError("state fields must be finite")
        if not np.all(u > 0.0):
            raise DomainError("cell density u must be positive at every node")
        if not self.t >= 0.0:
            raise DomainError(f"time must be >= 0, got {self.t}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class BoundarySignal:
    """One closed-form time signal from the preset family.

    kind/params:
      constant        s(t) = c
      exp_decay       s(t) = c + a*exp(-k*t)
      rational_decay  s(t) = c + 1/(a + k*t)
      sinusoid        s(t) = c + a*sin(k*t)
    """

    kind: str
    c: float
    a: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise DomainError(f"unknown signal kind {self.kind!r}; valid: {SIGNAL_KINDS}")
        if self.kind == "rational_decay" and not (self.a > 0.0 and self.k >= 0.0):
            raise DomainError("rational_decay requires a > 0 and k >= 0 (no pole for t >= 0)")

    @classmethod
    def constant(cls, c):
        return cls("constant", c)

    @classmethod
    def exp_decay(cls, c, a, k):
        return cls("exp_decay", c, a, k)

    @classmethod
    def rational_decay(cls, c, a, k):
        return cls("rational_decay", c, a, k)

    @classmethod
    def sinusoid(cls, c, a, k):
        return cls("sinusoid", c, a, k)

    def __call__(self, t: float) -> float:
        return eval_signal(self, t)

    def lower_bound(self, t0: float, t1: float) -> float:
        """Exact infimum of the signal over [t0, t1].

        constant/exp_decay/rational_decay are monotone, so the infimum
        sits at an interval endpoint; the sinusoid bound is c - |a|.
        """
        if self.kind == "sinusoid":
            return self.c - abs(self.a)
        lo = min(eval_signal(self, t0), eval_signal(self, t1))
        return min(lo, self.c) if self.kind == "exp_decay" else lo


def eval_signal(s: BoundarySignal, t: float) -> float:
    """Closed-form signal value at time t >= 0.

    Uses scalar libm calls so compiled and pure-python stepping lanes
    produce identical boundary values.
    """
    if not t >= 0.0:
        raise DomainError(f"signal time must be >= 0, got {t}")
    if s.kind == "constant":
        return s.c
    if s.kind == "exp_decay":
        return s.c + s.a * math.exp(-s.k * t)
    if s.kind == "rational_decay":
        return s.c + 1.0 / (s.a + s.k * t)
    return s.c + s.a * math.sin(s.k * t)


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet signals for u (alpha1/alpha2) and v (beta1/beta2).

    In the non-diffusive mode the beta slots are storage for the computed
    endpoint values of v, never imposed constraints.
    """

    alpha1: BoundarySignal
    alpha2: BoundarySignal
    beta1: BoundarySignal
    beta2: BoundarySignal

    @property
    def matched_alpha(self) -> bool:
        return self.alpha1 == self.alpha2

    def values(self, t: float):
        return (
            eval_signal(self.alpha1, t),
            eval_signal(self.alpha2, t),
            eval_signal(self.beta1, t),
            eval_signal(self.beta2, t),
        )


@dataclass(frozen=True)
class ChemicalField:
    """Original chemical concentration on the grid nodes, with the value
    pinned at x=0 during reconstruction (the transform only determines c
    up to a multiplicative constant)."""

    c: np.ndarray = field(compare=False, repr=False)
    gauge: float = 1.0

    def __post_init__(self):
        c = _readonly(self.c)
        if not np.all(c > 0.0):
            raise DomainError("chemical concentration must be positive everywhere")
        object.__setattr__(self, "c", c)


def characteristic_speeds(u, v, p: ModelParams):
    """Characteristic speeds (lambda_minus, lambda_plus) of the advective part.

    Accepts scalars or arrays.  The discriminant is positive whenever
    u > 0 and sign_chimu = +1; a negative discriminant (reachable only
    for sign_chimu = -1) raises HyperbolicityLossError.
    """
    e2 = 2.0 * p.epsilon / p.chi
    disc = (e2 + 1.0) ** 2 * np.square(v) + 4.0 * p.sign_chimu * np.asarray(u, dtype=float)
    if np.any(disc < 0.0):
        raise HyperbolicityLossError(
            "negative discriminant: characteristic speeds are complex (mixed-type regime)"
        )
    root = np.sqrt(disc)
    mid = (e2 - 1.0) * np.asarray(v, dtype=float)
    lam_minus = (mid - root) / 2.0
    lam_plus = (mid + root) / 2.0
    if np.ndim(lam_minus) == 0:
        return float(lam_minus), float(lam_plus)
    return lam_minus, lam_plus


def cole_hopf_forward(chem: ChemicalField, g: Grid) -> np.ndarray:
    """Discrete v = c_x / c: central differences inside, second-order
    one-sided differences at the endpoints."""
    c = chem.c
    if c.shape[0] != g.n_nodes:
        raise DomainError("chemical field length does not match the grid")
    return difference_quotient(c, g.dx) / c


def cole_hopf_inverse(v: np.ndarray, gauge: float, g: Grid) -> ChemicalField:
    """Reconstruct c from v by trapezoidal accumulation of the log-slope:
    c_i = gauge * exp(integral of v from 0 to x_i)."""
    if not gauge > 0.0:
        raise DomainError(f"gauge must be > 0, got {gauge}")
    v = np.asarray(v, dtype=float)
    if v.shape[0] != g.n_nodes:
        raise DomainError("field length does not match the grid")
    increments = 0.5 * g.dx * (v[1:] + v[:-1])
    log_c = np.concatenate(([0.0], np.cumsum(increments)))
    return ChemicalField(c=gauge * np.exp(log_c), gauge=gauge)


def reference_profiles(b: BoundarySpec, t: float, g: Grid):
    """Linear-in-x interpolants (A, B) of the boundary values at time t."""
    a1, a2, b1, b2 = b.values(t)
    x = g.nodes
    return (a2 - a1) * x + a1, (b2 - b1) * x + b1


def perturbation(s: State, b: BoundarySpec, mode: str, v_bar: float | None = None):
    """Deviation of (u, v) from its long-time reference.

    u is always measured against the interpolant A(., t).  v is measured
    against B(., t) in the diffusive mode and against the conserved initial
    mean v_bar in the non-diffusive mode.
    """
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; valid: {MODES}")
    a1, a2, b1, b2 = b.values(s.t)
    x = np.linspace(0.0, 1.0, s.u.shape[0])
    u_tilde = s.u - ((a2 - a1) * x + a1)
    if mode == MODE_EPS_POSITIVE:
        return u_tilde, s.v - ((b2 - b1) * x + b1)
    if v_bar is None:
        raise DomainError("v_bar is required in the non-diffusive mode")
    return u_tilde, s.v - v_bar


def rescaling_factors(chi: float, mu: float, D: float):
    """Scale factors (time, space, v) mapping original-model variables to
    the nondimensional transformed system."""
    if chi == 0.0 or mu == 0.0:
        raise DomainError("chi and mu must be nonzero")
    if not D > 0.0:
        raise DomainError(f"D must be > 0, got {D}")
    cm = abs(chi * mu)
    return cm / D, math.sqrt(cm) / D, math.copysign(1.0, chi) * math.sqrt(abs(chi) / abs(mu))
