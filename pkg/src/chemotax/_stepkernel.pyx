# cython: boundscheck=False, wraparound=False, initializedcheck=False
# cython: cdivision=True, language_level=3
"""Compiled stepping kernel.

Parity contract with ``_stepkernel_py.py``: every floating-point expression
here mirrors the numpy lane operation for operation (same association, same
precomputed scale factors, scalar libm for boundary signals) and the
extension is built with -ffp-contract=off, so the two lanes produce
bit-identical trajectories.  Change one, change both.
"""

import numpy as np

from libc.math cimport exp, fabs, isfinite, isnan, sin, sqrt

# status codes shared by both lanes
OK = 0
POSITIVITY_LOSS = 1
NONFINITE = 2

cdef long C_OK = 0
cdef long C_POSITIVITY_LOSS = 1
cdef long C_NONFINITE = 2


cdef inline double sig_eval(long kind, double c, double a, double k, double t) nogil:
    if kind == 0:
        return c
    elif kind == 1:
        return c + a * exp(-k * t)
    elif kind == 2:
        return c + 1.0 / (a + k * t)
    return c + a * sin(k * t)


def advance_chunk(
    double[::1] u,
    double[::1] v,
    long n_steps,
    long step0,
    double dt,
    double inv2dx,
    double invdx2,
    double coef_sign,
    double coef_vxx,
    double coef_v2x,
    long mode,
    long[::1] sig_kinds,
    double[:, ::1] sig_params,
    long has_forcing,
    double[::1] fu1,
    double[::1] fu2,
    double[::1] fv1,
    double[::1] fv2,
    double r1,
    double r2,
    double lam_lin,
    double lam_quad,
):
    """Advance (u, v) in place by n_steps forward-Euler steps.

    Same semantics and return value as the numpy lane: see
    ``_stepkernel_py.advance_chunk``.
    """
    cdef Py_ssize_t M = u.shape[0]
    cdef Py_ssize_t i
    cdef long j
    wu_arr = np.empty(M, dtype=np.float64)
    wv_arr = np.empty(M, dtype=np.float64)
    uv_arr = np.empty(M, dtype=np.float64)
    vv_arr = np.empty(M, dtype=np.float64)
    cdef double[::1] wu = wu_arr
    cdef double[::1] wv = wv_arr
    cdef double[::1] uvm = uv_arr
    cdef double[::1] vvm = vv_arr

    cdef double *base_u = &u[0]
    cdef double *base_v = &v[0]
    cdef double *cu = base_u
    cdef double *cv = base_v
    cdef double *nu = &wu[0]
    cdef double *nv = &wv[0]
    cdef double *uv = &uvm[0]
    cdef double *vv = &vvm[0]
    cdef double *tmp

    cdef double coef4 = 4.0 * coef_sign
    cdef double max_speed = 0.0
    cdef double min_u
    cdef long status = C_OK
    cdef long bad_step = -1
    cdef long bad_node = -1

    cdef double t_cur, t_new, e1, e2, rhs_u, rhs_v, rhs0, rhsN
    cdef double m_absv, m_disc, d, av, step_speed, m_u

    with nogil:
        min_u = cu[0]
        for i in range(1, M):
            if cu[i] < min_u:
                min_u = cu[i]

        e1 = 0.0
        e2 = 0.0
        for j in range(n_steps):
            for i in range(M):
                uv[i] = cu[i] * cv[i]
                vv[i] = cv[i] * cv[i]
            if has_forcing:
                t_cur = (<double> (step0 + j)) * dt
                e1 = exp(-r1 * t_cur)
                e2 = exp(-r2 * t_cur)
            for i in range(1, M - 1):
                rhs_u = (uv[i + 1] - uv[i - 1]) * inv2dx + (cu[i + 1] - 2.0 * cu[i] + cu[i - 1]) * invdx2
                rhs_v = (
                    coef_sign * ((cu[i + 1] - cu[i - 1]) * inv2dx)
                    + coef_vxx * ((cv[i + 1] - 2.0 * cv[i] + cv[i - 1]) * invdx2)
                    + coef_v2x * ((vv[i + 1] - vv[i - 1]) * inv2dx)
                )
                if has_forcing:
                    rhs_u = rhs_u + (fu1[i] * e1 + fu2[i] * e2)
                    rhs_v = rhs_v + (fv1[i] * e1 + fv2[i] * e2)
                nu[i] = cu[i] + dt * rhs_u
                nv[i] = cv[i] + dt * rhs_v

            t_new = (<double> (step0 + j + 1)) * dt
            nu[0] = sig_eval(sig_kinds[0], sig_params[0, 0], sig_params[0, 1], sig_params[0, 2], t_new)
            nu[M - 1] = sig_eval(sig_kinds[1], sig_params[1, 0], sig_params[1, 1], sig_params[1, 2], t_new)
            if mode == 0:
                nv[0] = sig_eval(sig_kinds[2], sig_params[2, 0], sig_params[2, 1], sig_params[2, 2], t_new)
                nv[M - 1] = sig_eval(sig_kinds[3], sig_params[3, 0], sig_params[3, 1], sig_params[3, 2], t_new)
            else:
                rhs0 = coef_sign * ((-3.0 * cu[0] + 4.0 * cu[1] - cu[2]) * inv2dx)
                rhsN = coef_sign * ((3.0 * cu[M - 1] - 4.0 * cu[M - 2] + cu[M - 3]) * inv2dx)
                if has_forcing:
                    rhs0 = rhs0 + (fv1[0] * e1 + fv2[0] * e2)
                    rhsN = rhsN + (fv1[M - 1] * e1 + fv2[M - 1] * e2)
                nv[0] = cv[0] + dt * rhs0
                nv[M - 1] = cv[M - 1] + dt * rhsN

            for i in range(M):
                if not nu[i] > 0.0:
                    status = C_NONFINITE if isnan(nu[i]) else C_POSITIVITY_LOSS
                    bad_node = i
                    break
                if not isfinite(nu[i]):
                    status = C_NONFINITE
                    bad_node = i
                    break
                if not isfinite(nv[i]):
                    status = C_NONFINITE
                    bad_node = i
                    break
            if status != C_OK:
                bad_step = step0 + j + 1
                break

            m_absv = 0.0
            m_disc = lam_quad * (nv[0] * nv[0]) + coef4 * nu[0]
            m_u = nu[0]
            for i in range(M):
                av = fabs(nv[i])
                if av > m_absv:
                    m_absv = av
                d = lam_quad * (nv[i] * nv[i]) + coef4 * nu[i]
                if d > m_disc:
                    m_disc = d
                if nu[i] < m_u:
                    m_u = nu[i]
            step_speed = 0.5 * (lam_lin * m_absv + sqrt(m_disc if m_disc > 0.0 else 0.0))
            if step_speed > max_speed:
                max_speed = step_speed
            if m_u < min_u:
                min_u = m_u

            tmp = cu
            cu = nu
            nu = tmp
            tmp = cv
            cv = nv
            nv = tmp

        if cu != base_u:
            for i in range(M):
                base_u[i] = cu[i]
                base_v[i] = cv[i]

    return status, bad_step, bad_node, max_speed, min_u
