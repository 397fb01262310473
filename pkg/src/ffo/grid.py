"""Shared uniform time grid and quadrature helpers.

All integrators in the toolkit run on one fixed-step grid so trajectories
can be compared index-by-index without interpolation.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import cumulative_trapezoid


def time_grid(t_final: float, dt: float) -> np.ndarray:
    """Uniform grid 0, dt, ..., t_final; t_final must be a multiple of dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < dt:
        raise ValueError("t_final must be at least dt")
    steps = int(round(t_final / dt))
    if abs(steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError(f"t_final={t_final} is not an integer multiple of dt={dt}")
    return np.arange(steps + 1) * dt


def cumtrapz_grid(y: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative trapezoid integral of samples y on a uniform grid, F(0)=0."""
    return cumulative_trapezoid(y, dx=dt, initial=0.0)


def cumsimpson_grid(y: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative composite-Simpson integral on a uniform grid, F(0)=0.

    Even indices use the standard pairwise Simpson rule; odd indices close
    the half-panel with cubic (four-point) interpolatory weights, so the
    result is exact for cubics at every index and O(dt^4)-accurate
    generally.  Used where closed forms are compared against integrated
    trajectories at tolerances the trapezoid rule cannot reach.
    """
    y = np.asarray(y)
    n = y.shape[0]
    out = np.zeros(n, dtype=np.result_type(y.dtype, float))
    if n == 1:
        return out
    if n == 2:
        out[1] = 0.5 * dt * (y[0] + y[1])
        return out
    # even targets: F[2m] = F[2m-2] + dt/3 (y[2m-2] + 4 y[2m-1] + y[2m])
    pair = dt / 3.0 * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pair)
    # odd targets: integrate [t_{k-1}, t_k] through the cubic on the four
    # nearest nodes (quadratic three-point rules where the grid is short)
    if n == 3:
        out[1] = dt / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2])
        return out
    k = np.arange(1, n, 2)
    first = k[(k >= 3) & (k + 1 <= n - 1)]
    out[first] = out[first - 1] + dt / 24.0 * (
        -y[first - 2] + 13.0 * y[first - 1] + 13.0 * y[first] - y[first + 1]
    )
    if 1 in k and n >= 4:
        out[1] = dt / 24.0 * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3])
    if (n - 1) % 2 == 1 and n - 1 >= 3:
        last = n - 1
        out[last] = out[last - 1] + dt / 24.0 * (
            y[last - 3] - 5.0 * y[last - 2] + 19.0 * y[last - 1] + 9.0 * y[last]
        )
    return out
