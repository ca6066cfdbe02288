"""Directional concurrence and its maximum over the sphere.

For a unit vector ``n`` the directional concurrence is built from
``<S_n>`` and ``<S_n^2>`` only. Its maximum over ``n`` (clamped at zero)
is conjectured to equal the Wootters concurrence of any symmetric state;
:func:`check_conjecture` tests that claim state by state.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .dicke import moments
from .pairwise import concurrence_unclamped, reduced_two_spin
from .tolerances import CLAMP

LATTICE_POINTS = 2048
REFINE_STARTS = 8
DENSE_LATTICE_POINTS = 100_000


class InconsistentMoments(ValueError):
    """Radicand of the directional concurrence is clearly negative."""


def unit(n):
    """Normalise a 3-vector (or accept ``(theta, phi)`` angles)."""
    n = np.asarray(n, dtype=float)
    if n.shape == (2,):
        th, ph = n
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    return n / norm


def directional_concurrence(mom, n):
    """Directional concurrence along ``n``.

    ``(N^2 - 4<S_n^2> - sqrt([N(N-2) + 4<S_n^2>]^2 - [4(N-1)<S_n>]^2)) / (2N(N-1))``
    """
    N = mom.N
    s1, s2 = mom.along(unit(n))
    a = N * (N - 2.0) + 4.0 * s2
    b = 4.0 * (N - 1.0) * s1
    rad = a * a - b * b
    if rad < 0.0:
        # relative window: both squares are O(N^4)
        if rad < -CLAMP * max(1.0, a * a):
            raise InconsistentMoments(f"negative radicand {rad!r}")
        rad = 0.0
    return (N * N - 4.0 * s2 - np.sqrt(rad)) / (2.0 * N * (N - 1.0))


def korbicz_witness(mom, n):
    """``1 - 4<S_n>^2/N^2 - 4 Var(S_n)/N``; positive iff entangled along ``n``."""
    N = mom.N
    s1, s2 = mom.along(unit(n))
    return 1.0 - 4.0 * s1 * s1 / (N * N) - 4.0 * (s2 - s1 * s1) / N


@lru_cache(maxsize=8)
def fibonacci_hemisphere(count):
    """``count`` nearly uniform unit vectors with ``z >= 0``.

    One hemisphere suffices because the directional concurrence is even in
    ``n``.
    """
    i = np.arange(count) + 0.5
    z = 1.0 - i / count
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    pts.setflags(write=False)
    return pts


def _seed_directions(mom, lattice):
    mean = mom.mean
    outer = np.outer(mean, mean)
    special = [np.eye(3), np.linalg.eigh(mom.K)[1].T, np.linalg.eigh(outer)[1].T]
    return np.vstack(special + [fibonacci_hemisphere(lattice)])


def max_directional(mom, lattice=LATTICE_POINTS, starts=REFINE_STARTS, xatol=1e-10, maxiter=2000):
    """Maximum of the directional concurrence over the unit sphere.

    Seeds are the coordinate axes, the eigenvectors of ``K`` and of
    ``m m^T`` and a Fibonacci lattice; the best ``starts`` seeds are polished
    with a Nelder-Mead simplex. Returns ``(n_star, value)``.
    """
    seeds = _seed_directions(mom, lattice)
    vals = _kernels.directional_values(mom.mean, mom.K, float(mom.N), seeds)
    order = np.argsort(vals)[::-1]
    best_n, best_v = seeds[order[0]], float(vals[order[0]])
    picked = []
    for idx in order:
        s = seeds[idx]
        # antipodal and near-duplicate seeds lead to the same local maximum
        if any(abs(s @ p) > 0.9999 for p in picked):
            continue
        picked.append(s)
        n, v = _kernels.refine_direction(mom.mean, mom.K, float(mom.N), s, 0.05, xatol, maxiter)
        if v > best_v:
            best_n, best_v = np.asarray(n), float(v)
        if len(picked) == starts:
            break
    if best_n[2] < 0 or (best_n[2] == 0 and best_n[1] < 0):
        best_n = -best_n
    return best_n, best_v


@dataclass(frozen=True)
class ConjectureReport:
    """Comparison of the directional maximum with the Wootters concurrence."""

    N: int
    seed: object
    c_wootters: float
    c_unclamped: float
    c_conjecture: float
    max_cn: float
    direction: np.ndarray
    gap: float
    gap_unclamped: float
    witness: float
    tol: float
    rechecked: bool = False

    @property
    def passed(self):
        """Clamped comparison ``max(0, max_n C_n)`` vs the concurrence."""
        return self.gap <= self.tol

    @property
    def passed_unclamped(self):
        """Stronger comparison ``max_n C_n`` vs ``sqrt(l1) - ... - sqrt(l4)``."""
        return self.gap_unclamped <= self.tol

    def as_record(self):
        return {
            "N": self.N,
            "seed": self.seed,
            "c_wootters": self.c_wootters,
            "c_unclamped": self.c_unclamped,
            "c_conjecture": self.c_conjecture,
            "max_cn": self.max_cn,
            "n_x": float(self.direction[0]),
            "n_y": float(self.direction[1]),
            "n_z": float(self.direction[2]),
            "gap": self.gap,
            "gap_unclamped": self.gap_unclamped,
            "witness": self.witness,
            "passed": self.passed,
            "passed_unclamped": self.passed_unclamped,
            "rechecked": self.rechecked,
        }


def check_conjecture(psi, tol=1e-7, seed=None):
    """Compare ``max_n C_n`` with the Wootters concurrence of ``psi``.

    A failing comparison is repeated with a dense lattice before it is
    reported, so that an optimiser miss is not mistaken for a counterexample.
    """
    mom = moments(psi)
    rho = reduced_two_spin(mom)
    cu = concurrence_unclamped(rho)
    cw = max(0.0, cu)
    n, v = max_directional(mom)
    rechecked = False
    if abs(v - cu) > tol:
        n2, v2 = max_directional(mom, lattice=DENSE_LATTICE_POINTS, starts=4 * REFINE_STARTS)
        rechecked = True
        if v2 > v:
            n, v = n2, v2
    cc = max(0.0, v)
    return ConjectureReport(
        N=psi.N, seed=seed, c_wootters=cw, c_unclamped=cu, c_conjecture=cc,
        max_cn=v, direction=n, gap=abs(cc - cw), gap_unclamped=abs(v - cu),
        witness=korbicz_witness(mom, n), tol=tol, rechecked=rechecked,
    )
