import numpy as np
from numba import njit

DIVERGENCE_LIMIT = 1e6


@njit(cache=True, nogil=True)
def _lorenz_rhs(x, y, z, sigma, r, b):
    return sigma * (y - x), x * (r - z) - y, x * y - b * z


@njit(cache=True, nogil=True)
def rk4_lorenz(state0, sigma, r, b, h, transient_steps, keep_steps):
    """
    Fixed-step RK4 for the Lorenz system.

    Returns (trajectory, failed_step). ``trajectory`` holds the
    ``keep_steps`` states following the transient; ``failed_step`` is the
    global step index at which a component left the divergence limit, or
    -1 when the run stayed bounded.
    """
    out = np.empty((keep_steps, 3), dtype=np.float64)
    x = state0[0]
    y = state0[1]
    z = state0[2]
    half = 0.5 * h
    total = transient_steps + keep_steps
    for step in range(total):
        k1x, k1y, k1z = _lorenz_rhs(x, y, z, sigma, r, b)
        k2x, k2y, k2z = _lorenz_rhs(x + half * k1x, y + half * k1y, z + half * k1z, sigma, r, b)
        k3x, k3y, k3z = _lorenz_rhs(x + half * k2x, y + half * k2y, z + half * k2z, sigma, r, b)
        k4x, k4y, k4z = _lorenz_rhs(x + h * k3x, y + h * k3y, z + h * k3z, sigma, r, b)
        x += h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        y += h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        z += h * (k1z + 2.0 * k2z + 2.0 * k3z + k4z) / 6.0
        if not (abs(x) <= DIVERGENCE_LIMIT and abs(y) <= DIVERGENCE_LIMIT and abs(z) <= DIVERGENCE_LIMIT):
            return out, step
        if step >= transient_steps:
            i = step - transient_steps
            out[i, 0] = x
            out[i, 1] = y
            out[i, 2] = z
    return out, -1
