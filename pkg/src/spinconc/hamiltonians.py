"""Collective Hamiltonians as banded Hermitian matrices in the Dicke basis.

Spin models are written in the reduced form

    H = (gamma_x S_x^2 + gamma_y S_y^2) / N + hx S_x + hy S_y + hz S_z

with ``gamma <= 0`` (ferromagnetic). The two-level boson model and its
mapping onto the uniaxial spin model live here as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dicke import DickeVector, m_values, moments, raise_coeffs


@dataclass(frozen=True)
class ModelParams:
    """Parameters of a collective spin Hamiltonian.

    ``gamma_x`` and ``gamma_y`` multiply ``S_x^2 / N`` and ``S_y^2 / N``;
    both must be nonpositive so the ground state stays in the maximal spin
    sector.
    """

    gamma_x: float
    gamma_y: float
    hx: float
    hy: float
    hz: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        if self.gamma_x > 0 or self.gamma_y > 0:
            raise ValueError("interaction coefficients must be nonpositive (ferromagnetic)")

    @classmethod
    def biaxial_transverse(cls, gamma, hz, N):
        """``-(S_x^2 + gamma S_y^2)/N + hz S_z`` with ``0 <= gamma <= 1``, ``hz >= 0``."""
        if not 0.0 <= gamma <= 1.0:
            raise ValueError(f"anisotropy must lie in [0, 1], got {gamma}")
        if hz < 0:
            raise ValueError("hz must be nonnegative")
        return cls(-1.0, -float(gamma), 0.0, 0.0, float(hz), N)

    @classmethod
    def uniaxial(cls, hx, hz, N):
        """``-S_x^2/N + hx S_x + hz S_z``."""
        return cls(-1.0, 0.0, float(hx), 0.0, float(hz), N)

    @classmethod
    def biaxial(cls, gamma, hx, hy, hz, N):
        """``-(S_x^2 + gamma S_y^2)/N + h.S`` (arbitrary field)."""
        return cls(-1.0, -float(gamma), float(hx), float(hy), float(hz), N)


@dataclass(frozen=True)
class BandedHermitian:
    """Hermitian matrix with half-bandwidth at most 2.

    Only the main diagonal and the two upper diagonals are stored; the
    lower triangle is the conjugate by construction.
    """

    d0: np.ndarray
    d1: np.ndarray
    d2: np.ndarray = field(default=None)

    def __post_init__(self):
        d0 = np.ascontiguousarray(np.real(self.d0), dtype=float).astype(complex)
        n = d0.shape[0]
        d1 = np.ascontiguousarray(self.d1, dtype=complex)
        d2 = np.zeros(max(n - 2, 0), complex) if self.d2 is None else np.ascontiguousarray(self.d2, dtype=complex)
        if d1.shape != (max(n - 1, 0),) or d2.shape != (max(n - 2, 0),):
            raise ValueError("diagonal lengths do not match the dimension")
        for a in (d0, d1, d2):
            a.setflags(write=False)
        object.__setattr__(self, "d0", d0)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)

    @property
    def dim(self):
        return self.d0.shape[0]

    @property
    def bandwidth(self):
        if np.any(self.d2 != 0):
            return 2
        return 1 if np.any(self.d1 != 0) else 0

    def is_real(self):
        return not (np.any(self.d1.imag != 0) or np.any(self.d2.imag != 0))

    def matvec(self, x):
        return _kernels.banded_matvec(self.d0, self.d1, self.d2, np.ascontiguousarray(x, dtype=complex))

    def to_dense(self):
        a = np.diag(self.d0)
        a += np.diag(self.d1, 1) + np.diag(np.conj(self.d1), -1)
        a += np.diag(self.d2, 2) + np.diag(np.conj(self.d2), -2)
        return a

    def norm_bound(self):
        """Upper bound on the spectral norm (maximum absolute row sum)."""
        r = np.abs(self.d0).copy()
        r[:-1] += np.abs(self.d1)
        r[1:] += np.abs(self.d1)
        r[:-2] += np.abs(self.d2)
        r[2:] += np.abs(self.d2)
        return float(r.max())

    def parity_blocks(self):
        """Split into even-``k`` and odd-``k`` blocks.

        Only valid when the first off-diagonal vanishes; each block is
        tridiagonal in its own indexing.
        """
        if np.any(self.d1 != 0):
            raise ValueError("matrix couples the two parity sectors")
        blocks = []
        for start in (0, 1):
            d0 = self.d0[start::2]
            d1 = self.d2[start::2][: max(d0.shape[0] - 1, 0)]
            blocks.append(BandedHermitian(d0, d1))
        return blocks[0], blocks[1]

    def expectation(self, psi):
        v = psi.amps if isinstance(psi, DickeVector) else np.asarray(psi)
        return float(np.vdot(v, self.matvec(v)).real)


def build_spin_hamiltonian(p):
    """Dicke-basis matrix of the collective Hamiltonian described by ``p``."""
    N = int(p.N)
    if N < 2:
        raise ValueError("N must be at least 2")
    M = m_values(N)
    c = raise_coeffs(N)
    cas = (N / 2.0) * (N / 2.0 + 1.0)
    gx, gy = p.gamma_x / N, p.gamma_y / N
    # S_x^2 + S_y^2 = S^2 - S_z^2 on the diagonal, S+^2 and S-^2 off it
    d0 = 0.5 * (gx + gy) * (cas - M**2) + p.hz * M
    d1 = 0.5 * c * (p.hx + 1j * p.hy)
    d2 = 0.25 * (gx - gy) * c[1:] * c[:-1]
    return BandedHermitian(d0, d1, d2)


@dataclass(frozen=True)
class BosonFieldMapping:
    """Correspondence between the boson model ``(x, y)`` and ``(hx, hz)``.

    ``H_boson = scale * H_spin(hx, hz) + shift`` where ``H_spin`` is the
    uniaxial model written in the frame rotated about ``y`` by ``alpha``.
    """

    x: float
    y: float
    alpha: float
    hx: float
    hz: float
    scale: float
    shift_per_spin: float
    x_c: float

    def shift(self, N):
        return self.shift_per_spin * N


def transition_point(y):
    """``x_c = (4 + y^2) / (5 + y^2)``."""
    return (4.0 + y * y) / (5.0 + y * y)


def boson_to_field(x, y):
    """Map boson control parameters onto the uniaxial spin model.

    The rotation angle obeys ``tan(alpha) = -y/2``; the branch with
    ``cos(alpha) < 0`` gives ``hz < 0`` for ``0 < x < 1``.
    Both branches are related by a pi rotation about ``y`` and share one
    spectrum.
    """
    if x >= 1:
        raise ValueError(f"x must be < 1 to keep the interaction ferromagnetic, got {x}")
    q = 4.0 + y * y
    x_c = transition_point(y)
    alpha = np.arctan2(y / np.sqrt(q), -2.0 / np.sqrt(q))
    if x == x_c:
        hx = 0.0
    else:
        hx = y * (5.0 + y * y) * (x - x_c) / ((x - 1.0) * q**1.5)
    hz = 2.0 * x / ((x - 1.0) * q**1.5)
    scale = (1.0 - x) * q
    shift_per_spin = x / 2.0 - y * y * (1.0 - x) / 4.0
    return BosonFieldMapping(
        x=float(x), y=float(y), alpha=float(alpha), hx=float(hx), hz=float(hz),
        scale=float(scale), shift_per_spin=float(shift_per_spin), x_c=float(x_c),
    )


def build_boson_hamiltonian(x, y, N):
    """``x n_t - (1-x)/N Q Q`` with ``Q = s+t + t+s + y n_t`` in the ``n_t`` basis."""
    N = int(N)
    if N < 2:
        raise ValueError("N must be at least 2")
    n_t = np.arange(N + 1, dtype=float)
    # <n_t + 1| t+ s |n_t> = sqrt((n_t + 1)(N - n_t))
    hop = np.sqrt((n_t[:-1] + 1.0) * (N - n_t[:-1]))
    # Q is real symmetric tridiagonal: diag y n_t, off-diagonal hop
    q0 = y * n_t
    q1 = hop
    # (Q Q)_{ii} = q0_i^2 + q1_{i-1}^2 + q1_i^2
    sq0 = q0**2
    sq0[1:] += q1**2
    sq0[:-1] += q1**2
    sq1 = q1 * (q0[:-1] + q0[1:])
    sq2 = q1[:-1] * q1[1:]
    g = (1.0 - x) / N
    return BandedHermitian(x * n_t - g * sq0, -g * sq1, -g * sq2)


def boson_order_parameter(state, mapping=None):
    """``<n_t>/N`` of a boson-basis vector or of a mapped spin state.

    Parameters
    ----------
    state : DickeVector or array_like
        Either the boson vector over ``n_t = 0..N`` (``mapping`` omitted) or
        a ground state of the rotated spin Hamiltonian (``mapping`` given).
    mapping : BosonFieldMapping, optional
        Rotation used to express the spin state in the boson frame.
    """
    if not isinstance(state, DickeVector):
        state = DickeVector(len(state) - 1, state)
    N = state.N
    if mapping is None:
        p = np.abs(state.amps) ** 2
        return float(p @ np.arange(N + 1)) / N
    mom = moments(state)
    sz = -np.sin(mapping.alpha) * mom.mean[0] + np.cos(mapping.alpha) * mom.mean[2]
    return 0.5 + float(sz) / N
