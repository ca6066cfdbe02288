"""Hermitian eigensolvers for Dicke-basis Hamiltonians.

``dense_hermitian_eigs`` handles the full spectrum of small matrices;
``lanczos_ground`` finds the ground state of a banded matrix with full
reorthogonalisation and is what makes N of several thousand practical.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .dicke import DickeVector
from .hamiltonians import BandedHermitian

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Lanczos did not reach the requested residual; ``best`` holds the estimate."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray | None = None
    residual: float | None = None


def fix_phase(v):
    """Rotate ``v`` so that its first non-negligible component is real positive."""
    v = np.asarray(v, dtype=complex)
    idx = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max())[0]
    return v * (abs(v[idx]) / v[idx])


def dense_hermitian_eigs(A, want_vectors=True, tol=1e-12):
    """Full spectrum of a Hermitian matrix (dense or :class:`BandedHermitian`).

    Eigenvectors are returned as columns with the phase convention of
    :func:`fix_phase`.
    """
    if isinstance(A, BandedHermitian):
        A = A.to_dense()
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.conj().T).max() > tol * scale:
        raise ValueError("matrix is not Hermitian")
    if not want_vectors:
        return EigenResult(np.linalg.eigvalsh(A))
    w, V = np.linalg.eigh(A)
    V = np.column_stack([fix_phase(V[:, i]) for i in range(V.shape[1])])
    return EigenResult(w, V)


def _lanczos(A, tol, max_iter, seed, check_every=10):
    """Ground pair of ``A`` by Lanczos with full reorthogonalisation."""
    d = A.dim
    if d == 1:
        return float(A.d0[0].real), np.ones(1, complex), 0.0
    rng = np.random.Generator(np.random.PCG64(seed))
    real = A.is_real()
    dtype = float if real else complex
    q = rng.standard_normal(d) if real else rng.standard_normal(d) + 1j * rng.standard_normal(d)
    q /= np.linalg.norm(q)
    matvec = (lambda v: A.matvec(v).real) if real else A.matvec
    kmax = min(max_iter, d)
    Q = np.empty((kmax, d), dtype=dtype)
    alpha = np.empty(kmax)
    beta = np.empty(kmax)
    anorm = A.norm_bound()
    target = tol * max(anorm, 1.0)
    energy, vec, res = np.inf, q, np.inf
    for j in range(kmax):
        Q[j] = q
        w = matvec(q)
        alpha[j] = np.vdot(q, w).real
        # full reorthogonalisation; second pass only on severe cancellation (DGKS)
        before = np.linalg.norm(w)
        w -= Q[: j + 1].T @ (Q[: j + 1].conj() @ w)
        if np.linalg.norm(w) < 0.7071 * before:
            w -= Q[: j + 1].T @ (Q[: j + 1].conj() @ w)
        b = np.linalg.norm(w)
        beta[j] = b
        done = b <= 1e-14 * max(anorm, 1.0) or j + 1 == kmax
        if done or (j + 1) % check_every == 0:
            vals, vecs = eigh_tridiagonal(alpha[: j + 1], beta[:j], select="i", select_range=(0, 0))
            energy = float(vals[0])
            res = abs(b * vecs[-1, 0])
            if res <= target or done:
                vec = vecs[:, 0] @ Q[: j + 1]
                break
        q = w / b
    vec /= np.linalg.norm(vec)
    # true residual, independent of the recurrence
    res = float(np.linalg.norm(matvec(vec) - energy * vec))
    if res > target:
        raise ConvergenceError(
            f"Lanczos residual {res:.3e} above {target:.3e} after {j + 1} steps", (energy, vec, res)
        )
    return energy, vec, res


def lanczos_ground(A, tol=1e-12, max_iter=3000, seed=0, use_parity=None):
    """Ground energy and vector of a banded Hermitian matrix.

    Parameters
    ----------
    A : BandedHermitian
    tol : float
        Residual target relative to a bound on ``||A||``.
    max_iter : int
        Maximum Krylov dimension per block.
    seed : int
        Seed of the random starting vector.
    use_parity : bool, optional
        Split into even/odd ``k`` blocks and return the lower block minimum.
        Defaults to ``True`` whenever the first off-diagonal vanishes, which
        avoids mixing quasi-degenerate parity partners.

    Returns
    -------
    energy : float
    state : DickeVector
    """
    if A.dim < 2:
        raise ValueError("need dimension >= 2")
    N = A.dim - 1
    if use_parity is None:
        use_parity = not np.any(A.d1 != 0)
    if not use_parity:
        e, v, _ = _lanczos(A, tol, max_iter, seed)
        return e, DickeVector(N, fix_phase(v))
    even, odd = A.parity_blocks()
    best = None
    for start, block in ((0, even), (1, odd)):
        e, v, _ = _lanczos(block, tol, max_iter, seed + start)
        if best is None or e < best[0]:
            full = np.zeros(A.dim, dtype=complex)
            full[start::2] = v
            best = (e, full)
    return best[0], DickeVector(N, fix_phase(best[1]))


def ground_state(A, method="auto", **kwargs):
    """Ground pair by dense diagonalisation (small ``d``) or Lanczos."""
    if method == "auto":
        method = "dense" if A.dim <= 600 else "lanczos"
    if method == "lanczos":
        return lanczos_ground(A, **kwargs)
    if isinstance(A, BandedHermitian) and not np.any(A.d1 != 0):
        # parity blocks keep exact degeneracies from mixing the sectors
        N = A.dim - 1
        best = None
        for start, block in zip((0, 1), A.parity_blocks()):
            r = dense_hermitian_eigs(block)
            if best is None or r.values[0] < best[0]:
                full = np.zeros(A.dim, dtype=complex)
                full[start::2] = r.vectors[:, 0]
                best = (float(r.values[0]), full)
        return best[0], DickeVector(N, fix_phase(best[1]))
    r = dense_hermitian_eigs(A)
    return float(r.values[0]), DickeVector(A.dim - 1, r.vectors[:, 0])
