"""Two-spin reduced density matrix of symmetric states and its concurrence.

The matrix is assembled from collective moments only. Three routes to the
concurrence are provided:

* :func:`concurrence_wootters` -- general two-qubit formula, reference route;
* :func:`concurrence_parity` -- closed form for parity eigenstates;
* :func:`concurrence_real_cubic` -- closed form for real states with ``u > w``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import CLAMP, STRUCTURAL

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
#: sigma_y (x) sigma_y in the basis {uu, ud, du, dd}
YY = np.kron(_SY, _SY).real


class NotApplicable(ValueError):
    """A closed-form route was asked for outside its domain of validity."""


class UnphysicalDensity(ValueError):
    """Density matrix or spectrum violates positivity beyond the clamp window."""


@dataclass(frozen=True)
class TwoSpinDensity:
    """4x4 reduced density matrix in the basis ``{uu, ud, du, dd}``.

    The named entries follow the symmetric-state layout::

        [[v+,  x+*, x+*, u* ],
         [x+,  w,   y,   x-*],
         [x+,  y,   w,   x-*],
         [u,   x-,  x-,  v- ]]
    """

    matrix: np.ndarray

    @property
    def v_plus(self):
        return float(self.matrix[0, 0].real)

    @property
    def v_minus(self):
        return float(self.matrix[3, 3].real)

    @property
    def x_plus(self):
        return complex(self.matrix[1, 0])

    @property
    def x_minus(self):
        return complex(self.matrix[3, 1])

    @property
    def w(self):
        return float(self.matrix[1, 1].real)

    @property
    def y(self):
        return float(self.matrix[1, 2].real)

    @property
    def u(self):
        return complex(self.matrix[3, 0])

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix)

    def check(self, tol=STRUCTURAL):
        """Raise :class:`UnphysicalDensity` if any structural invariant fails."""
        r = self.matrix
        if abs(np.trace(r) - 1.0) > tol:
            raise UnphysicalDensity(f"trace {np.trace(r).real!r} != 1")
        if np.max(np.abs(r - r.conj().T)) > tol:
            raise UnphysicalDensity("matrix is not Hermitian")
        if abs(self.w - self.y) > tol:
            raise UnphysicalDensity(f"w={self.w!r} differs from y={self.y!r}")
        lo = self.eigenvalues()[0]
        if lo < -tol:
            raise UnphysicalDensity(f"negative eigenvalue {lo!r}")
        return self


def reduced_two_spin(mom):
    """Two-spin density matrix of a symmetric state from its moments."""
    N = mom.N
    if N < 2:
        raise ValueError("two-spin reduction needs N >= 2")
    sz = mom.mean[2]
    sz2 = mom.K[2, 2]
    perp = mom.K[0, 0] + mom.K[1, 1]
    nn = N * (N - 1.0)

    v_p = (N * N - 2 * N + 4 * sz2 + 4 * (N - 1) * sz) / (4 * nn)
    v_m = (N * N - 2 * N + 4 * sz2 - 4 * (N - 1) * sz) / (4 * nn)
    x_p = ((N - 1) * mom.s_plus + mom.s_plus_z) / (2 * nn)
    x_m = ((N - 1) * mom.s_plus - mom.s_plus_z) / (2 * nn)
    w = (N * N - 4 * sz2) / (4 * nn)
    y = (perp - N / 2.0) / nn
    u = mom.s_plus2 / nn

    xp, xm = np.conj(x_p), np.conj(x_m)
    rho = np.array(
        [
            [v_p, xp, xp, np.conj(u)],
            [x_p, w, y, xm],
            [x_p, y, w, xm],
            [u, x_m, x_m, v_m],
        ],
        dtype=complex,
    )
    out = TwoSpinDensity(rho)
    try:
        out.check()
    except UnphysicalDensity as exc:
        raise UnphysicalDensity(f"inconsistent moments: {exc}") from None
    return out


def _matrix(rho):
    return rho.matrix if isinstance(rho, TwoSpinDensity) else np.asarray(rho, dtype=complex)


def spin_flip(rho):
    """Spin-flipped matrix ``(Y x Y) rho* (Y x Y)``."""
    r = _matrix(rho)
    flipped = YY @ r.conj() @ YY
    return TwoSpinDensity(flipped) if isinstance(rho, TwoSpinDensity) else flipped


def _clamp(values, what):
    lo = values.min()
    if lo < -CLAMP:
        raise UnphysicalDensity(f"{what} has eigenvalue {lo!r} below -{CLAMP}")
    return np.clip(values, 0.0, None)


def wootters_sqrt_lambdas(rho):
    """Square roots of the eigenvalues of ``rho rho~``, descending.

    ``rho = A A^dagger`` with ``A = V sqrt(p)``; the singular values of the
    complex-symmetric matrix ``A^T (Y x Y) A`` are the square roots of the
    spectrum of the Hermitian product ``rho^1/2 rho~ rho^1/2``, so no
    non-normal eigenproblem is ever solved.
    """
    r = _matrix(rho)
    r = 0.5 * (r + r.conj().T)
    p, V = np.linalg.eigh(r)
    p = _clamp(p, "rho")
    A = V * np.sqrt(p)
    tau = A.T @ YY @ A
    return np.linalg.svd(tau, compute_uv=False)


def wootters_lambdas(rho):
    """Eigenvalues of ``rho rho~`` in descending order."""
    return wootters_sqrt_lambdas(rho) ** 2


def concurrence_unclamped(rho):
    """``sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)`` without the max with 0."""
    s = wootters_sqrt_lambdas(rho)
    return float(s[0] - s[1] - s[2] - s[3])


def concurrence_wootters(rho):
    """Wootters concurrence of a two-qubit density matrix."""
    return max(0.0, concurrence_unclamped(rho))


def _is_parity_symmetric(rho, tol):
    return abs(rho.x_plus) <= tol and abs(rho.x_minus) <= tol


def concurrence_parity(rho, tol=STRUCTURAL):
    """Closed form for parity eigenstates (``x+ = x- = 0``).

    Both branches are evaluated; the one selected by the sign of
    ``2y - sqrt(v+ v-) - |u|`` is returned.
    """
    if not _is_parity_symmetric(rho, tol):
        raise NotApplicable(f"x+={rho.x_plus!r}, x-={rho.x_minus!r} are not zero")
    return _parity_branches(rho)[0]


def _parity_branches(rho):
    y = rho.y
    au = abs(rho.u)
    gm = np.sqrt(max(rho.v_plus * rho.v_minus, 0.0))
    first = 2.0 * max(0.0, au - y)
    second = 2.0 * max(0.0, y - gm)
    chosen = first if 2.0 * y < gm + au else second
    return chosen, first, second


@dataclass(frozen=True)
class CubicResult:
    """Outcome of the real-state cubic route.

    ``roots`` are the three nonzero roots of ``Q(mu)/mu``; ``concurrence`` is
    ``None`` when the closed form does not apply (``u <= w``).
    """

    concurrence: float | None
    roots: np.ndarray
    applicable: bool


def cubic_coefficients(rho):
    """Coefficients of ``Q(mu)/mu`` (highest degree first) for a real ``rho``."""
    v_p, v_m, y = rho.v_plus, rho.v_minus, rho.y
    u = rho.u.real
    x_p, x_m = rho.x_plus.real, rho.x_minus.real
    return np.array(
        [
            1.0,
            2.0 * (u - y),
            u * u - v_p * v_m - 4.0 * u * y + 4.0 * x_p * x_m,
            2.0 * (y * v_p * v_m + 2.0 * u * x_p * x_m - u * u * y - v_p * x_m**2 - v_m * x_p**2),
        ]
    )


def concurrence_real_cubic(rho, tol=STRUCTURAL):
    """Closed form ``max(0, 2(u - y))`` for real states with ``u > w``.

    Raises
    ------
    NotApplicable
        If ``rho`` is not real.
    """
    if np.max(np.abs(_matrix(rho).imag)) > tol:
        raise NotApplicable("density matrix is not real")
    roots = np.roots(cubic_coefficients(rho))
    u = rho.u.real
    if u <= rho.w:
        return CubicResult(None, roots, False)
    return CubicResult(max(0.0, 2.0 * (u - rho.y)), roots, True)
