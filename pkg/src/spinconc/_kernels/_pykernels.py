"""Pure NumPy/SciPy implementations of the hot kernels.

Signatures mirror ``_ckernels`` exactly; this module is used when the
compiled extension is unavailable or disabled.
"""
import numpy as np
from scipy.optimize import minimize


def banded_matvec(d0, d1, d2, x):
    """``y = A x`` for a Hermitian matrix stored by its upper diagonals."""
    y = d0 * x
    y[:-1] += d1 * x[1:]
    y[1:] += np.conj(d1) * x[:-1]
    if d2.shape[0]:
        y[:-2] += d2 * x[2:]
        y[2:] += np.conj(d2) * x[:-2]
    return y


def directional_values(mean, K, N, dirs):
    """Directional concurrence for each row of ``dirs`` (radicand clamped at 0)."""
    s1 = dirs @ mean
    s2 = np.einsum("ij,jk,ik->i", dirs, K, dirs)
    a = N * (N - 2.0) + 4.0 * s2
    b = 4.0 * (N - 1.0) * s1
    rad = np.clip(a * a - b * b, 0.0, None)
    return (N * N - 4.0 * s2 - np.sqrt(rad)) / (2.0 * N * (N - 1.0))


def _chart(n0):
    n0 = n0 / np.linalg.norm(n0)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n0[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n0, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n0, e1)
    return n0, e1, e2


def refine_direction(mean, K, N, n0, step, xatol, maxiter):
    """Nelder-Mead maximisation of the directional concurrence near ``n0``.

    Works in the tangent chart ``n(a, b) = normalise(n0 + a e1 + b e2)``,
    which is regular at every point of the sphere. Returns ``(n, value)``.
    """
    n0, e1, e2 = _chart(np.asarray(n0, dtype=float))

    def direction(p):
        v = n0 + p[0] * e1 + p[1] * e2
        return v / np.linalg.norm(v)

    def f(p):
        return -directional_values(mean, K, N, direction(p)[None, :])[0]

    simplex = np.array([[0.0, 0.0], [step, 0.0], [0.0, step]])
    res = minimize(
        f,
        np.zeros(2),
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": xatol, "fatol": 1e-15, "maxiter": maxiter},
    )
    return direction(res.x), -float(res.fun)
