"""Observable quantities of a run: relative entropy, discrete Sobolev norms
of the perturbations, Fisher-type dissipation, the conserved v-mass, and
steady-state residuals.

All quadrature is trapezoidal (second order, exact on the linear reference
profiles); derivatives are repeated difference quotients with one-sided
second-order endpoint stencils, matching the scheme's interior accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .model import (
    MODE_EPS_POSITIVE,
    DomainError,
    Grid,
    State,
    characteristic_speeds,
    eval_signal,
    perturbation,
    reference_profiles,
)
from .stencils import (
    central_difference_interior,
    difference_quotient,
    second_difference_interior,
    trapezoid,
)

if TYPE_CHECKING:
    from .solver import SchemeConfig

# densities below this are treated as positivity loss, not noise
U_FLOOR = 1e-14


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One sampling instant's observables.

    entropy and lyapunov are None when undefined: the relative entropy
    needs a positive reference level, and the Lyapunov value is only
    defined for matched u-boundary data.  Norm fields are squared.
    """

    t: float
    entropy: float | None
    lyapunov: float | None
    l2_u_tilde: float
    l2_v_tilde: float
    h1_u_tilde: float
    h1_v_tilde: float
    h2_u_tilde: float
    h2_v_tilde: float
    fisher: float
    v_mass: float
    sup_dist_u: float
    sup_dist_v: float
    boundary_values: tuple
    max_char_speed: float
    advective_cfl: float


def relative_entropy(u: np.ndarray, alpha: float, g: Grid) -> float:
    """Convex distance of the density u from the constant level alpha:
    the integral of (u ln u - u) - (alpha ln alpha - alpha) - (u - alpha) ln alpha."""
    u = np.asarray(u, dtype=float)
    if not alpha > U_FLOOR:
        raise DomainError(f"entropy reference level must be positive, got {alpha}")
    if not np.all(u > U_FLOOR):
        raise DomainError("relative entropy needs a strictly positive density")
    la = math.log(alpha)
    integrand = (u * np.log(u) - u) - (alpha * la - alpha) - (u - alpha) * la
    return trapezoid(integrand, g.dx)


def fisher_dissipation(u: np.ndarray, g: Grid) -> float:
    """Instantaneous entropy-dissipation integrand: integral of (u_x)^2 / u."""
    u = np.asarray(u, dtype=float)
    if not np.all(u > U_FLOOR):
        raise DomainError("Fisher dissipation needs a strictly positive density")
    ux = difference_quotient(u, g.dx)
    return trapezoid(ux * ux / u, g.dx)


def discrete_norms(f: np.ndarray, g: Grid, order: int) -> float:
    """Squared discrete Sobolev norm of order 0, 1 or 2 (cumulative ladder:
    order k sums the quadratures of the 0th..k-th difference quotients squared)."""
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2, got {order}")
    f = np.asarray(f, dtype=float)
    total = trapezoid(f * f, g.dx)
    for _ in range(order):
        f = difference_quotient(f, g.dx)
        total += trapezoid(f * f, g.dx)
    return total


def v_mass(v: np.ndarray, g: Grid) -> float:
    """Trapezoidal integral of v over [0, 1]; conserved in the
    non-diffusive mode under matched u-boundary data."""
    return trapezoid(np.asarray(v, dtype=float), g.dx)


def lyapunov_value(s: State, b, g: Grid) -> float | None:
    """Relative entropy plus half the squared L2 distance of v from the
    boundary interpolant.  None (undefined) when the u-boundary data are
    unmatched or the shared level is not positive at this time."""
    if not b.matched_alpha:
        return None
    alpha = eval_signal(b.alpha1, s.t)
    if not alpha > U_FLOOR:
        return None
    _, B = reference_profiles(b, s.t, g)
    diff = s.v - B
    return relative_entropy(s.u, alpha, g) + 0.5 * trapezoid(diff * diff, g.dx)


def _interior_rates(s: State, cfg: "SchemeConfig"):
    """Semi-discrete right-hand sides at the interior nodes."""
    g = cfg.grid
    p = cfg.params
    u, v = s.u, s.v
    rate_u = central_difference_interior(u * v, g.dx) + second_difference_interior(u, g.dx)
    rate_v = p.sign_chimu * central_difference_interior(u, g.dx)
    if p.epsilon != 0.0:
        rate_v = rate_v + (p.epsilon / p.D) * second_difference_interior(v, g.dx)
        rate_v = rate_v + (p.epsilon / p.chi) * central_difference_interior(v * v, g.dx)
    if cfg.forcing is not None:
        f = cfg.forcing
        e1 = math.exp(-f.r1 * s.t)
        e2 = math.exp(-f.r2 * s.t)
        rate_u = rate_u + (f.fu1[1:-1] * e1 + f.fu2[1:-1] * e2)
        rate_v = rate_v + (f.fv1[1:-1] * e1 + f.fv2[1:-1] * e2)
    return rate_u, rate_v


def steady_state_residual(s: State, cfg: "SchemeConfig", component: str = "both") -> float:
    """Sup-norm of the instantaneous semi-discrete update rate: zero exactly
    at a discrete steady state.  component selects 'u', 'v' or 'both'; in
    the non-diffusive mode the v rate includes the endpoint transport terms
    that drive the boundary values of v."""
    if component not in ("u", "v", "both"):
        raise DomainError(f"component must be 'u', 'v' or 'both', got {component!r}")
    rate_u, rate_v = _interior_rates(s, cfg)
    pieces = []
    if component in ("u", "both"):
        pieces.append(float(np.max(np.abs(rate_u))))
    if component in ("v", "both"):
        vmax = float(np.max(np.abs(rate_v))) if rate_v.size else 0.0
        if cfg.mode != MODE_EPS_POSITIVE:
            g = cfg.grid
            u = s.u
            end0 = cfg.params.sign_chimu * (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * g.dx)
            end1 = cfg.params.sign_chimu * (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * g.dx)
            if cfg.forcing is not None:
                f = cfg.forcing
                e1 = math.exp(-f.r1 * s.t)
                e2 = math.exp(-f.r2 * s.t)
                end0 += f.fv1[0] * e1 + f.fv2[0] * e2
                end1 += f.fv1[-1] * e1 + f.fv2[-1] * e2
            vmax = max(vmax, abs(end0), abs(end1))
        pieces.append(vmax)
    return max(pieces)


def compute_record(s: State, cfg: "SchemeConfig", v_bar: float | None) -> DiagnosticsRecord:
    """Assemble the full observable set for one sampling instant."""
    g = cfg.grid
    b = cfg.boundary
    diffusive = cfg.mode == MODE_EPS_POSITIVE

    u_tilde, v_tilde = perturbation(s, b, cfg.mode, v_bar)
    A, B = reference_profiles(b, s.t, g)

    alpha = eval_signal(b.alpha1, s.t)
    entropy = relative_entropy(s.u, alpha, g) if alpha > U_FLOOR else None
    if entropy is None or not b.matched_alpha:
        lyap = None
    else:
        # v is measured against B(., t) in the diffusive mode, against its
        # conserved initial mean otherwise
        diff = s.v - B if diffusive else s.v - v_bar
        lyap = entropy + 0.5 * trapezoid(diff * diff, g.dx)

    if diffusive:
        a1, a2, b1, b2 = b.values(s.t)
    else:
        a1, a2 = eval_signal(b.alpha1, s.t), eval_signal(b.alpha2, s.t)
        b1, b2 = float(s.v[0]), float(s.v[-1])

    lam_minus, lam_plus = characteristic_speeds(s.u, s.v, cfg.params)
    speed = float(max(np.max(np.abs(lam_minus)), np.max(np.abs(lam_plus))))

    return DiagnosticsRecord(
        t=s.t,
        entropy=entropy,
        lyapunov=lyap,
        l2_u_tilde=discrete_norms(u_tilde, g, 0),
        l2_v_tilde=discrete_norms(v_tilde, g, 0),
        h1_u_tilde=discrete_norms(u_tilde, g, 1),
        h1_v_tilde=discrete_norms(v_tilde, g, 1),
        h2_u_tilde=discrete_norms(u_tilde, g, 2),
        h2_v_tilde=discrete_norms(v_tilde, g, 2),
        fisher=fisher_dissipation(s.u, g),
        v_mass=v_mass(s.v, g),
        sup_dist_u=float(np.max(np.abs(u_tilde))),
        sup_dist_v=float(np.max(np.abs(v_tilde))),
        boundary_values=(float(a1), float(a2), float(b1), float(b2)),
        max_char_speed=speed,
        advective_cfl=speed * g.dt / g.dx,
    )
