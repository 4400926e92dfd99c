"""Pure-numpy stepping kernel: the fallback lane and the semantic twin of
the compiled extension.

Parity contract with ``_stepkernel.pyx``: every floating-point expression
below is mirrored there operation for operation (same association, same
precomputed scale factors, scalar libm for boundary signals, no FMA), so
the two lanes produce bit-identical trajectories.  Change one, change both.
"""

from __future__ import annotations

import math

import numpy as np

# status codes shared by both lanes
OK = 0
POSITIVITY_LOSS = 1
NONFINITE = 2


def _sig_eval(kind, c, a, k, t):
    if kind == 0:
        return c
    if kind == 1:
        return c + a * math.exp(-k * t)
    if kind == 2:
        return c + 1.0 / (a + k * t)
    return c + a * math.sin(k * t)


def advance_chunk(
    u,
    v,
    n_steps,
    step0,
    dt,
    inv2dx,
    invdx2,
    coef_sign,
    coef_vxx,
    coef_v2x,
    mode,
    sig_kinds,
    sig_params,
    has_forcing,
    fu1,
    fu2,
    fv1,
    fv2,
    r1,
    r2,
    lam_lin,
    lam_quad,
):
    """Advance (u, v) in place by n_steps forward-Euler steps.

    mode 0 imposes all four boundary signals at the new time level; mode 1
    imposes only the u signals and advances the v endpoints with the
    one-sided transport rate built from the pre-step u.

    Returns (status, bad_step, bad_node, max_speed, min_u) where max_speed
    is a per-step upper bound on the largest characteristic speed and
    min_u the smallest density seen over the chunk.
    """
    M = u.shape[0]
    cu, cv = u, v
    nu, nv = np.empty(M), np.empty(M)
    coef4 = 4.0 * coef_sign

    max_speed = 0.0
    min_u = float(np.min(u))
    status = OK
    bad_step = -1
    bad_node = -1
    e1 = e2 = 0.0

    # silent IEEE semantics like the compiled lane; the post-step scan
    # classifies any overflow/NaN and aborts
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for j in range(n_steps):
            uv = cu * cv
            vv = cv * cv
            rhs_u = (uv[2:] - uv[:-2]) * inv2dx + (cu[2:] - 2.0 * cu[1:-1] + cu[:-2]) * invdx2
            rhs_v = (
                coef_sign * ((cu[2:] - cu[:-2]) * inv2dx)
                + coef_vxx * ((cv[2:] - 2.0 * cv[1:-1] + cv[:-2]) * invdx2)
                + coef_v2x * ((vv[2:] - vv[:-2]) * inv2dx)
            )
            if has_forcing:
                t_cur = (step0 + j) * dt
                e1 = math.exp(-r1 * t_cur)
                e2 = math.exp(-r2 * t_cur)
                rhs_u = rhs_u + (fu1[1:-1] * e1 + fu2[1:-1] * e2)
                rhs_v = rhs_v + (fv1[1:-1] * e1 + fv2[1:-1] * e2)
            nu[1:-1] = cu[1:-1] + dt * rhs_u
            nv[1:-1] = cv[1:-1] + dt * rhs_v

            t_new = (step0 + j + 1) * dt
            nu[0] = _sig_eval(
                sig_kinds[0], sig_params[0, 0], sig_params[0, 1], sig_params[0, 2], t_new
            )
            nu[M - 1] = _sig_eval(
                sig_kinds[1], sig_params[1, 0], sig_params[1, 1], sig_params[1, 2], t_new
            )
            if mode == 0:
                nv[0] = _sig_eval(
                    sig_kinds[2], sig_params[2, 0], sig_params[2, 1], sig_params[2, 2], t_new
                )
                nv[M - 1] = _sig_eval(
                    sig_kinds[3], sig_params[3, 0], sig_params[3, 1], sig_params[3, 2], t_new
                )
            else:
                rhs0 = coef_sign * ((-3.0 * cu[0] + 4.0 * cu[1] - cu[2]) * inv2dx)
                rhsN = coef_sign * ((3.0 * cu[M - 1] - 4.0 * cu[M - 2] + cu[M - 3]) * inv2dx)
                if has_forcing:
                    rhs0 = rhs0 + (fv1[0] * e1 + fv2[0] * e2)
                    rhsN = rhsN + (fv1[M - 1] * e1 + fv2[M - 1] * e2)
                nv[0] = cv[0] + dt * rhs0
                nv[M - 1] = cv[M - 1] + dt * rhsN

            if not (np.all(nu > 0.0) and np.all(np.isfinite(nu)) and np.all(np.isfinite(nv))):
                # cold path: locate the first offending node the way the
                # compiled lane does (ascending scan, u before v)
                for i in range(M):
                    if not nu[i] > 0.0:
                        status = NONFINITE if math.isnan(nu[i]) else POSITIVITY_LOSS
                        bad_node = i
                        break
                    if not math.isfinite(nu[i]):
                        status = NONFINITE
                        bad_node = i
                        break
                    if not math.isfinite(nv[i]):
                        status = NONFINITE
                        bad_node = i
                        break
                bad_step = step0 + j + 1
                break

            m_absv = float(np.max(np.abs(nv)))
            m_disc = float(np.max(lam_quad * (nv * nv) + coef4 * nu))
            step_speed = 0.5 * (lam_lin * m_absv + math.sqrt(m_disc if m_disc > 0.0 else 0.0))
            if step_speed > max_speed:
                max_speed = step_speed
            m_u = float(np.min(nu))
            if m_u < min_u:
                min_u = m_u

            cu, nu = nu, cu
            cv, nv = nv, cv

    if cu is not u:
        u[:] = cu
        v[:] = cv
    return status, bad_step, bad_node, max_speed, min_u
