"""Finite-size analysis: power-law fits and extrapolation in 1/N."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FitError(ValueError):
    """Data unsuitable for the requested fit; ``diagnostics`` says why."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class FitResult:
    """``|reference - value| ~ amplitude * N^(-exponent)``."""

    exponent: float
    amplitude: float
    residual: float
    n_range: tuple


def fit_power_law(Ns, values, reference):
    """Least-squares slope of ``log|reference - value|`` against ``log N``."""
    Ns = np.asarray(Ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if Ns.shape != values.shape or Ns.size < 4:
        raise FitError("need at least four (N, value) pairs")
    order = np.argsort(Ns)
    Ns, values = Ns[order], values[order]
    dist = np.abs(reference - values)
    if np.any(dist == 0.0) or np.any(np.diff(dist) >= 0.0):
        raise FitError(
            "values do not approach the reference monotonically",
            {"N": Ns.tolist(), "distance": dist.tolist()},
        )
    X = np.column_stack([np.ones_like(Ns), np.log(Ns)])
    coef, res, *_ = np.linalg.lstsq(X, np.log(dist), rcond=None)
    resid = float(np.linalg.norm(X @ coef - np.log(dist)))
    return FitResult(
        exponent=float(-coef[1]), amplitude=float(np.exp(coef[0])),
        residual=resid, n_range=(int(Ns[0]), int(Ns[-1])),
    )


@dataclass(frozen=True)
class Extrapolation:
    limit: float
    error: float
    order: int
    ill_conditioned: bool


def extrapolate(Ns, values, order=2, cond_limit=1e12):
    """Polynomial-in-1/N extrapolation to ``N -> infinity``.

    The ``order + 1`` largest ``N`` are interpolated exactly (Richardson
    extrapolation); the error estimate is the change from the fit of one
    order lower.
    """
    Ns = np.asarray(Ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if Ns.size < 3 or Ns.shape != values.shape:
        raise ValueError("need at least three points")
    order = min(order, Ns.size - 1)
    idx = np.argsort(Ns)

    def limit_of(k):
        sel = idx[-(k + 1):]
        V = np.vander(1.0 / Ns[sel], k + 1, increasing=True)
        return np.linalg.solve(V, values[sel])[0], np.linalg.cond(V)

    est, cond = limit_of(order)
    lower, _ = limit_of(order - 1)
    return Extrapolation(float(est), float(abs(est - lower)), order, bool(cond > cond_limit))
