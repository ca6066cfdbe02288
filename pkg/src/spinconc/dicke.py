"""Permutation-symmetric states of N spins-1/2 in the Dicke basis.

Indexing convention (used everywhere in the package): amplitude ``amps[k]``
multiplies ``|S=N/2, M>`` with ``k = M + N/2``, so ``k = 0`` is the fully
down state and ``k = N`` the fully up state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlogy

from .tolerances import NORM

#: name of the bit generator behind :func:`random_symmetric_state`
RNG_NAME = "PCG64"


def m_values(N):
    """Magnetic quantum numbers ``M`` for ``k = 0..N``."""
    return np.arange(N + 1, dtype=float) - N / 2.0


def raise_coeffs(N):
    """Ladder coefficients ``<k+1|S+|k>`` for ``k = 0..N-1``.

    ``S(S+1) - M(M+1) = (N-k)(k+1)`` with ``S = N/2``.
    """
    k = np.arange(N, dtype=float)
    return np.sqrt((N - k) * (k + 1.0))


@dataclass(frozen=True)
class DickeVector:
    """Normalised symmetric pure state.

    Parameters
    ----------
    N : int
        Number of spins, at least 2.
    amps : array_like
        ``N + 1`` complex amplitudes, low ``M`` first. Normalised on
        construction; the stored array is read-only.
    """

    N: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        N = int(self.N)
        if N != self.N or N < 2:
            raise ValueError(f"need an integer N >= 2, got {self.N!r}")
        amps = np.array(self.amps, dtype=complex).ravel()
        if amps.shape != (N + 1,):
            raise ValueError(f"expected {N + 1} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("zero vector cannot be normalised")
        if abs(norm - 1.0) > NORM:
            amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self):
        return self.N + 1

    def is_real(self, tol=0.0):
        """True when all amplitudes are real (up to ``tol``)."""
        return bool(np.all(np.abs(self.amps.imag) <= tol))

    def rotate_z(self, angle):
        """Return ``exp(-i angle S_z) |psi>``."""
        return DickeVector(self.N, self.amps * np.exp(-1j * angle * m_values(self.N)))


@dataclass(frozen=True)
class SpinMoments:
    """First and symmetrised second moments of the collective spin.

    Attributes
    ----------
    N : int
    mean : ndarray, shape (3,)
        ``<S_x>, <S_y>, <S_z>``.
    K : ndarray, shape (3, 3)
        ``K_ab = <S_a S_b + S_b S_a> / 2``.
    s_plus, s_plus2, s_plus_z : complex
        ``<S+>``, ``<S+^2>`` and ``<S+ S_z + S_z S+>``.
    """

    N: int
    mean: np.ndarray
    K: np.ndarray
    s_plus: complex
    s_plus2: complex
    s_plus_z: complex

    @property
    def casimir(self):
        s = self.N / 2.0
        return s * (s + 1.0)

    def along(self, n):
        """``(<S_n>, <S_n^2>)`` for a unit vector ``n``."""
        n = np.asarray(n, dtype=float)
        return float(n @ self.mean), float(n @ self.K @ n)


_OPS = {
    "Sx": "Sx", "Sy": "Sy", "Sz": "Sz",
    "S+": "Sp", "Sp": "Sp", "S-": "Sm", "Sm": "Sm",
    "Sx2": "Sx2", "Sy2": "Sy2", "Sz2": "Sz2",
    "Sx^2": "Sx2", "Sy^2": "Sy2", "Sz^2": "Sz2",
}


def _raise(N, v):
    out = np.zeros_like(v)
    out[1:] = raise_coeffs(N) * v[:-1]
    return out


def _lower(N, v):
    out = np.zeros_like(v)
    out[:-1] = raise_coeffs(N) * v[1:]
    return out


def apply_collective(op, psi):
    """Image of ``psi`` under a collective spin operator (not normalised).

    ``op`` is one of ``Sx, Sy, Sz, S+, S-, Sx2, Sy2, Sz2``. ``psi`` may be a
    :class:`DickeVector` or a bare amplitude array of length ``N + 1``.
    """
    try:
        key = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown collective operator {op!r}") from None
    v = psi.amps if isinstance(psi, DickeVector) else np.asarray(psi, dtype=complex)
    N = v.shape[0] - 1
    if key == "Sz":
        return m_values(N) * v
    if key == "Sz2":
        return m_values(N) ** 2 * v
    if key == "Sp":
        return _raise(N, v)
    if key == "Sm":
        return _lower(N, v)
    if key == "Sx":
        return 0.5 * (_raise(N, v) + _lower(N, v))
    if key == "Sy":
        return -0.5j * (_raise(N, v) - _lower(N, v))
    inner = "Sx" if key == "Sx2" else "Sy"
    return apply_collective(inner, apply_collective(inner, v))


def moments(psi):
    """Collect :class:`SpinMoments` of ``psi`` from O(N) band products."""
    N = psi.N
    a = psi.amps
    p = np.abs(a) ** 2
    M = m_values(N)
    c = raise_coeffs(N)

    sz = float(p @ M)
    sz2 = float(p @ M**2)
    # <S+> = sum_k conj(a_{k+1}) c_k a_k
    sp = complex(np.sum(np.conj(a[1:]) * c * a[:-1]))
    sp2 = complex(np.sum(np.conj(a[2:]) * c[1:] * c[:-1] * a[:-2]))
    # S+ S_z + S_z S+ on |k> gives (2M_k + 1) c_k |k+1>
    spz = complex(np.sum(np.conj(a[1:]) * (2.0 * M[:-1] + 1.0) * c * a[:-1]))

    cas = (N / 2.0) * (N / 2.0 + 1.0)
    perp = cas - sz2  # <Sx^2 + Sy^2>
    sxx = 0.5 * (perp + sp2.real)
    syy = 0.5 * (perp - sp2.real)
    sxy = 0.5 * sp2.imag
    sxz = 0.5 * spz.real
    syz = 0.5 * spz.imag
    K = np.array([[sxx, sxy, sxz], [sxy, syy, syz], [sxz, syz, sz2]])
    mean = np.array([sp.real, sp.imag, sz])
    return SpinMoments(N=N, mean=mean, K=K, s_plus=sp, s_plus2=sp2, s_plus_z=spz)


def dicke_state(N, M):
    """Basis state ``|N/2, M>``."""
    k = M + N / 2.0
    if k != int(k) or not 0 <= k <= N:
        raise ValueError(f"M={M} is not a valid projection for N={N}")
    amps = np.zeros(N + 1, dtype=complex)
    amps[int(k)] = 1.0
    return DickeVector(N, amps)


def coherent_state(N, theta, phi):
    """Product state with every spin along the Bloch angles ``(theta, phi)``.

    Each spin is ``cos(theta/2) e^{-i phi/2}|up> + sin(theta/2) e^{i phi/2}|down>``.
    """
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    if not 0.0 <= phi < 2.0 * np.pi:
        raise ValueError(f"phi must lie in [0, 2 pi), got {phi}")
    k = np.arange(N + 1, dtype=float)
    # theta in [0, pi] keeps both half-angle factors nonnegative
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    log_binom = gammaln(N + 1.0) - gammaln(k + 1.0) - gammaln(N - k + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mag = 0.5 * log_binom + xlogy(k, c) + xlogy(N - k, s)
    amps = np.exp(log_mag) * np.exp(-1j * phi * m_values(N))
    return DickeVector(N, amps)


def random_symmetric_state(N, seed):
    """Symmetric state with i.i.d. complex Gaussian amplitudes.

    The ensemble is the unitarily invariant (Haar) measure on the symmetric
    subspace. Deterministic for a fixed ``(N, seed)``; ``seed`` may be an int
    or a :class:`numpy.random.SeedSequence`.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)
    return DickeVector(N, z)


def random_real_state(N, seed):
    """Symmetric state with i.i.d. real Gaussian amplitudes."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return DickeVector(N, rng.standard_normal(N + 1))


def random_parity_state(N, seed, parity=0):
    """Random complex state supported on ``k`` of one parity (a Pi eigenstate)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)
    z[(np.arange(N + 1) % 2) != parity] = 0.0
    return DickeVector(N, z)
