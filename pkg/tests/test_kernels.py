"""Stepping-kernel contracts: agreement with a straight-line transcription
of the update formulas, bit parity between the compiled and numpy lanes,
chunk/single-step equivalence, and abort classification."""

import math

import numpy as np
import pytest

import chemotax as ct
from chemotax import kernels
from chemotax.model import BoundarySignal
from chemotax.solver import _kernel_call_args

HAVE_COMPILED = "compiled" in ct.available_backends()
BACKENDS = list(ct.available_backends())

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")


def _config(mode, epsilon, n_cells=20):
    alpha = BoundarySignal.exp_decay(0.7, 0.3, 5.0)
    beta1 = BoundarySignal.rational_decay(0.3, 1.0, 2.0)
    beta2 = BoundarySignal.sinusoid(0.2, 0.05, 3.0)
    return ct.SchemeConfig(
        mode=mode,
        grid=ct.make_grid(epsilon, n_cells),
        params=ct.ModelParams(epsilon=epsilon),
        boundary=ct.BoundarySpec(alpha1=alpha, alpha2=alpha, beta1=beta1, beta2=beta2),
        t_end=1.0,
    )


def _smooth_state(grid):
    x = grid.nodes
    u = 0.6 + 0.2 * np.sin(2.0 * math.pi * x) + 0.05 * np.cos(6.0 * math.pi * x)
    v = 0.3 * np.cos(2.0 * math.pi * x) - 0.1 * np.sin(4.0 * math.pi * x)
    return ct.State(u=u, v=v, t=0.0)


def naive_step(state, cfg):
    """Independent straight-line transcription of one update, scalar Python
    floats, no vectorization or reordering."""
    g = cfg.grid
    p = cfg.params
    b = cfg.boundary
    dt, dx = g.dt, g.dx
    inv2dx = 1.0 / (2.0 * dx)
    invdx2 = 1.0 / (dx * dx)
    sign = float(p.sign_chimu)
    cvxx = p.epsilon / p.D
    cv2x = p.epsilon / p.chi
    u = [float(val) for val in state.u]
    v = [float(val) for val in state.v]
    M = len(u)
    uv = [u[i] * v[i] for i in range(M)]
    vv = [v[i] * v[i] for i in range(M)]
    un = list(u)
    vn = list(v)
    for i in range(1, M - 1):
        rhs_u = (uv[i + 1] - uv[i - 1]) * inv2dx + (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invdx2
        rhs_v = (
            sign * ((u[i + 1] - u[i - 1]) * inv2dx)
            + cvxx * ((v[i + 1] - 2.0 * v[i] + v[i - 1]) * invdx2)
            + cv2x * ((vv[i + 1] - vv[i - 1]) * inv2dx)
        )
        un[i] = u[i] + dt * rhs_u
        vn[i] = v[i] + dt * rhs_v
    t_new = 1.0 * dt  # stepping from t = 0
    un[0] = ct.eval_signal(b.alpha1, t_new)
    un[M - 1] = ct.eval_signal(b.alpha2, t_new)
    if cfg.mode == ct.MODE_EPS_POSITIVE:
        vn[0] = ct.eval_signal(b.beta1, t_new)
        vn[M - 1] = ct.eval_signal(b.beta2, t_new)
    else:
        vn[0] = v[0] + dt * (sign * ((-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2dx))
        vn[M - 1] = v[M - 1] + dt * (
            sign * ((3.0 * u[M - 1] - 4.0 * u[M - 2] + u[M - 3]) * inv2dx)
        )
    return np.array(un), np.array(vn)


@pytest.mark.parametrize("mode,epsilon", [(ct.MODE_EPS_POSITIVE, 0.7), (ct.MODE_EPS_ZERO, 0.0)])
@pytest.mark.parametrize("backend", BACKENDS)
def test_single_step_matches_naive_transcription(mode, epsilon, backend):
    cfg = _config(mode, epsilon)
    state = _smooth_state(cfg.grid)
    expect_u, expect_v = naive_step(state, cfg)
    stepper = ct.step_eps_positive if mode == ct.MODE_EPS_POSITIVE else ct.step_eps_zero
    new, report = stepper(state, cfg, backend=backend)
    assert np.array_equal(new.u, expect_u), "u update deviates from the transcription"
    assert np.array_equal(new.v, expect_v), "v update deviates from the transcription"
    assert report.u_min == np.min(expect_u)
    assert report.advective_cfl < cfg.cfl_guard


@needs_compiled
@pytest.mark.parametrize("mode,epsilon", [(ct.MODE_EPS_POSITIVE, 0.7), (ct.MODE_EPS_ZERO, 0.0)])
def test_lanes_bit_identical_over_chunk(mode, epsilon):
    cfg = _config(mode, epsilon, n_cells=50)
    state = _smooth_state(cfg.grid)
    results = {}
    for backend in ("compiled", "python"):
        u = np.array(state.u)
        v = np.array(state.v)
        res = kernels.advance(u, v, n_steps=2000, step0=0, backend=backend, **_kernel_call_args(cfg))
        results[backend] = (u, v, res)
    uc, vc, rc = results["compiled"]
    up, vp, rp = results["python"]
    assert np.array_equal(uc, up) and np.array_equal(vc, vp)
    assert rc == rp  # status, monitors and extrema agree exactly


@needs_compiled
def test_lanes_bit_identical_with_forcing():
    scn = ct.mms_preset(50, ct.MODE_EPS_POSITIVE)
    state = scn.build_initial()
    results = {}
    for backend in ("compiled", "python"):
        u = np.array(state.u)
        v = np.array(state.v)
        res = kernels.advance(
            u, v, n_steps=500, step0=0, backend=backend, **_kernel_call_args(scn.cfg)
        )
        results[backend] = (u, v, res)
    assert np.array_equal(results["compiled"][0], results["python"][0])
    assert np.array_equal(results["compiled"][1], results["python"][1])
    assert results["compiled"][2] == results["python"][2]


@pytest.mark.parametrize("backend", BACKENDS)
def test_chunked_equals_repeated_single_steps(backend):
    cfg = _config(ct.MODE_EPS_POSITIVE, 0.7)
    state = _smooth_state(cfg.grid)
    u = np.array(state.u)
    v = np.array(state.v)
    kernels.advance(u, v, n_steps=7, step0=0, backend=backend, **_kernel_call_args(cfg))
    s = state
    for _ in range(7):
        s, _ = ct.step_eps_positive(s, cfg, backend=backend)
    assert np.array_equal(s.u, u) and np.array_equal(s.v, v)


@pytest.mark.parametrize("backend", BACKENDS)
def test_positivity_loss_reported_with_node_and_step(backend):
    # an imposed nonpositive boundary density must abort with node 0
    cfg = _config(ct.MODE_EPS_POSITIVE, 0.7)
    args = _kernel_call_args(cfg)
    args["sig_params"] = np.array(args["sig_params"])
    args["sig_params"][0] = (-1.0, 0.0, 0.0)  # alpha1 constant -1
    state = _smooth_state(cfg.grid)
    u = np.array(state.u)
    v = np.array(state.v)
    res = kernels.advance(u, v, n_steps=100, step0=0, backend=backend, **args)
    assert res.status == kernels.POSITIVITY_LOSS
    assert res.bad_step == 1 and res.bad_node == 0
    # the caller's arrays keep the last healthy (pre-step) state
    assert np.array_equal(u, state.u) and np.array_equal(v, state.v)


@pytest.mark.parametrize("backend", BACKENDS)
def test_overflow_reported_as_instability(backend):
    cfg = _config(ct.MODE_EPS_POSITIVE, 0.7)
    x = cfg.grid.nodes
    v = np.where(x < 0.5, 1e200, -1e200)
    state = ct.State(u=np.ones_like(x), v=v, t=0.0)
    u_arr = np.array(state.u)
    v_arr = np.array(state.v)
    res = kernels.advance(
        u_arr, v_arr, n_steps=10, step0=0, backend=backend, **_kernel_call_args(cfg)
    )
    assert res.status != kernels.OK
    assert res.bad_step == 1


@needs_compiled
def test_abort_agreement_across_lanes():
    cfg = _config(ct.MODE_EPS_ZERO, 0.0)
    x = cfg.grid.nodes
    state = ct.State(u=1.0 + 0.5 * np.sin(2 * math.pi * x), v=50.0 * np.cos(9 * math.pi * x), t=0.0)
    outcomes = {}
    for backend in ct.available_backends():
        u = np.array(state.u)
        v = np.array(state.v)
        res = kernels.advance(u, v, n_steps=5000, step0=0, backend=backend, **_kernel_call_args(cfg))
        outcomes[backend] = res
    assert outcomes["compiled"] == outcomes["python"]
