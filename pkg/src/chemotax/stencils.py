"""Second-order difference quotients and trapezoidal quadrature on the
uniform unit-interval mesh.  Shared by the transform, the diagnostics, and
the residual monitor; the time-stepping kernels carry their own copies of
the interior stencils for speed."""

from __future__ import annotations

import numpy as np


def difference_quotient(f: np.ndarray, dx: float) -> np.ndarray:
    """First derivative: central inside, second-order one-sided at the ends."""
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
    return out


def second_difference_interior(f: np.ndarray, dx: float) -> np.ndarray:
    """Three-point second derivative at interior nodes (length N-1)."""
    f = np.asarray(f, dtype=float)
    return (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (dx * dx)


def central_difference_interior(f: np.ndarray, dx: float) -> np.ndarray:
    """Central first derivative at interior nodes (length N-1)."""
    f = np.asarray(f, dtype=float)
    return (f[2:] - f[:-2]) / (2.0 * dx)


def trapezoid(f: np.ndarray, dx: float) -> float:
    """Trapezoidal integral over [0, 1]; exact on linear node data."""
    f = np.asarray(f, dtype=float)
    return float(dx * (0.5 * (f[0] + f[-1]) + np.sum(f[1:-1])))
