"""Finite-N ground-state observables from exact diagonalisation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..dicke import DickeVector, moments
from ..directional import max_directional
from ..eigensolve import dense_hermitian_eigs, fix_phase, lanczos_ground
from ..hamiltonians import build_spin_hamiltonian
from ..pairwise import concurrence_unclamped, concurrence_wootters, reduced_two_spin

#: relative energy window for treating two parity minima as one level
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class ExactPoint:
    """Ground-state summary at one parameter point."""

    N: int
    energy: float
    state: DickeVector
    concurrence: float
    cR: float
    m: float
    direction: np.ndarray
    degenerate: bool


def _block_minima(A, method, seed):
    """Lowest state in each parity block as full-length vectors."""
    out = []
    for start, block in zip((0, 1), A.parity_blocks()):
        if method == "lanczos":
            e, v = lanczos_ground(block, seed=seed + start, use_parity=False)
            v = v.amps
        else:
            r = dense_hermitian_eigs(block)
            e, v = float(r.values[0]), r.vectors[:, 0]
        full = np.zeros(A.dim, dtype=complex)
        full[start::2] = v
        out.append((e, full))
    return out


def min_concurrence_member(u, v):
    """Member of ``span(u, v)`` with the smallest concurrence.

    Parametrised as ``cos(c) u + exp(i s) sin(c) v``; the unclamped Wootters
    combination is minimised so that the search still has a slope where the
    clamped value is already zero.
    """
    N = len(u) - 1

    def state(p):
        return np.cos(p[0]) * u + np.exp(1j * p[1]) * np.sin(p[0]) * v

    def f(p):
        return concurrence_unclamped(reduced_two_spin(moments(DickeVector(N, state(p)))))

    grid = [(c, s) for c in np.linspace(0, np.pi, 33)[:-1] for s in np.linspace(0, 2 * np.pi, 17)[:-1]]
    starts = sorted(grid, key=f)[:4]
    best = None
    for p0 in starts:
        r = minimize(f, p0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        if best is None or r.fun < best.fun:
            best = r
    return DickeVector(N, state(best.x))


def ground_point(params, method="auto", resolve="parity", seed=0, directions=True):
    """Exact ground-state observables for a :class:`ModelParams`.

    Parameters
    ----------
    method : {"auto", "dense", "lanczos"}
    resolve : {"parity", "min_concurrence"}
        What to return when the ground level is degenerate. ``"parity"``
        keeps the lower parity eigenstate; ``"min_concurrence"`` picks the
        least entangled member of the two-dimensional ground space.
    directions : bool
        Also locate the maximising direction of the directional concurrence.
    """
    A = build_spin_hamiltonian(params)
    N = int(params.N)
    if method == "auto":
        method = "dense" if A.dim <= 600 else "lanczos"
    degenerate = False
    if not np.any(A.d1 != 0):
        (e0, v0), (e1, v1) = _block_minima(A, method, seed)
        if e1 < e0:
            (e0, v0), (e1, v1) = (e1, v1), (e0, v0)
        degenerate = abs(e1 - e0) <= DEGENERACY_TOL * max(1.0, abs(e0))
        energy = e0
        if degenerate and resolve == "min_concurrence":
            psi = min_concurrence_member(v0, v1)
        else:
            psi = DickeVector(N, fix_phase(v0))
    elif method == "lanczos":
        energy, psi = lanczos_ground(A, seed=seed)
    else:
        r = dense_hermitian_eigs(A)
        energy, psi = float(r.values[0]), DickeVector(N, r.vectors[:, 0])
    mom = moments(psi)
    c = concurrence_wootters(reduced_two_spin(mom))
    n = max_directional(mom)[0] if directions else np.full(3, np.nan)
    m = 1.0 - 4.0 * mom.K[2, 2] / (N * N)
    return ExactPoint(
        N=N, energy=float(energy), state=psi, concurrence=c, cR=(N - 1) * c,
        m=float(m), direction=n, degenerate=degenerate,
    )
