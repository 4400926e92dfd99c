"""Backend selection for the stepping kernel.

The compiled extension is preferred when present; the numpy lane is the
fallback.  Both implement the same parity contract, so results do not
depend on the choice.  Override with the environment variable
``CHEMOTAX_KERNEL`` set to ``compiled`` or ``python`` (default ``auto``).
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from . import _stepkernel_py

OK = _stepkernel_py.OK
POSITIVITY_LOSS = _stepkernel_py.POSITIVITY_LOSS
NONFINITE = _stepkernel_py.NONFINITE

try:
    from . import _stepkernel  # type: ignore[attr-defined]
except ImportError:
    _stepkernel = None


def _select_default() -> str:
    choice = os.environ.get("CHEMOTAX_KERNEL", "auto").lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(f"CHEMOTAX_KERNEL must be auto/compiled/python, got {choice!r}")
    if choice == "compiled" and _stepkernel is None:
        raise ImportError("CHEMOTAX_KERNEL=compiled but the extension is not built")
    if choice == "auto":
        return "compiled" if _stepkernel is not None else "python"
    return choice


BACKEND = _select_default()


def available_backends():
    return ("compiled", "python") if _stepkernel is not None else ("python",)


class AdvanceResult(NamedTuple):
    status: int
    bad_step: int
    bad_node: int
    max_speed: float  # chunk max of a per-step characteristic-speed bound
    min_u: float


class Forcing(NamedTuple):
    """Source terms f(x, t) = f1(x)*exp(-r1*t) + f2(x)*exp(-r2*t) for the
    manufactured-solution harness, sampled on the grid nodes."""

    fu1: np.ndarray
    fu2: np.ndarray
    fv1: np.ndarray
    fv2: np.ndarray
    r1: float
    r2: float


def advance(
    u: np.ndarray,
    v: np.ndarray,
    *,
    n_steps: int,
    step0: int,
    dt: float,
    dx: float,
    coef_sign: float,
    coef_vxx: float,
    coef_v2x: float,
    mode: int,
    sig_kinds: np.ndarray,
    sig_params: np.ndarray,
    forcing: Forcing | None = None,
    backend: str | None = None,
) -> AdvanceResult:
    """Advance the nodal fields in place by n_steps explicit steps.

    u and v must be contiguous float64 arrays; they are mutated.  See the
    kernel modules for the update formulas and the parity contract.
    """
    name = backend or BACKEND
    if name == "compiled":
        if _stepkernel is None:
            raise ImportError("compiled kernel requested but not built")
        impl = _stepkernel.advance_chunk
    elif name == "python":
        impl = _stepkernel_py.advance_chunk
    else:
        raise ValueError(f"unknown backend {name!r}")

    M = u.shape[0]
    if forcing is None:
        zeros = np.zeros(M)
        fu1 = fu2 = fv1 = fv2 = zeros
        has_forcing, r1, r2 = 0, 0.0, 0.0
    else:
        fu1, fu2, fv1, fv2 = forcing.fu1, forcing.fu2, forcing.fv1, forcing.fv2
        has_forcing, r1, r2 = 1, forcing.r1, forcing.r2

    # scale factors precomputed once so both lanes multiply by the exact
    # same constants (never divide in the hot loop)
    inv2dx = 1.0 / (2.0 * dx)
    invdx2 = 1.0 / (dx * dx)
    lam_lin = abs(2.0 * coef_v2x - 1.0)
    lam_quad = (2.0 * coef_v2x + 1.0) ** 2

    out = impl(
        u,
        v,
        int(n_steps),
        int(step0),
        dt,
        inv2dx,
        invdx2,
        coef_sign,
        coef_vxx,
        coef_v2x,
        int(mode),
        np.ascontiguousarray(sig_kinds, dtype=np.int64),
        np.ascontiguousarray(sig_params, dtype=np.float64),
        has_forcing,
        np.ascontiguousarray(fu1, dtype=np.float64),
        np.ascontiguousarray(fu2, dtype=np.float64),
        np.ascontiguousarray(fv1, dtype=np.float64),
        np.ascontiguousarray(fv2, dtype=np.float64),
        r1,
        r2,
        lam_lin,
        lam_quad,
    )
    return AdvanceResult(*out)
