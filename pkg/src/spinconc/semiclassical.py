"""Thermodynamic-limit results for the collective models.

Uniaxial model in an arbitrary field
------------------------------------
``H = -S_x^2/N + hx S_x + hz S_z`` is bosonised with Holstein-Primakoff,
``S_z = a+a - N/2``, and the boson is shifted by ``a+ = sqrt(N) lambda + b+``
with ``lambda = beta / sqrt(1 + beta^2)``. The order-N term is the classical
energy :func:`classical_energy`; at its minimum ``beta0`` the order-sqrt(N)
term vanishes and the order-1 term is the quadratic form

    A n_b + (B/2) (b+^2 + b^2) + const,

diagonalised by ``c+ = cosh(T/2) b+ + sinh(T/2) b`` with ``tanh T = B/A``.
To the same order ``S_y = sqrt(N) (b+ - b) / (2i sqrt(1 + beta^2))``, so in
the ``c`` vacuum ``4 <S_y^2>/N = e^T / (1 + beta^2)`` and the rescaled
concurrence is ``1 - e^T / (1 + beta^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .dicke import dicke_state, moments

BETA_BOUND = 10.0
SCAN_POINTS = 4096

FIRST_ORDER_LINE = "first_order_line"
CRITICAL_POINT = "critical_point"
SYMMETRY_BROKEN = "symmetric_broken"
POLARIZED = "polarized"


class SemiclassicalError(ValueError):
    """The expansion is not valid at the requested field point."""


def classical_energy(beta, hx, hz):
    """Classical energy per spin of the shifted-boson ansatz."""
    b2 = beta * beta
    return (-2.0 * b2 + 2.0 * hx * beta * (1.0 + b2) - hz * (1.0 - b2 * b2)) / (2.0 * (1.0 + b2) ** 2)


def linear_coefficient(beta, hx, hz):
    """Coefficient of ``sqrt(N)(b+ + b)``; vanishes at stationary ``beta``."""
    b2 = beta * beta
    num = -2.0 * beta * (1.0 - b2) + hx * (1.0 - b2 * b2) + 2.0 * hz * beta * (1.0 + b2)
    return num / (2.0 * (1.0 + b2) ** 1.5)


def _stationary_roots(hx, hz):
    # numerator of linear_coefficient as a quartic in beta
    coeffs = [-hx, 2.0 + 2.0 * hz, 0.0, 2.0 * hz - 2.0, hx]
    if hx == 0.0:
        coeffs = coeffs[1:]
    r = np.roots(coeffs)
    return r[np.abs(r.imag) < 1e-7].real


@dataclass(frozen=True)
class BetaMinimum:
    beta0: float
    energy: float
    degenerate: bool


def minimize_beta(hx, hz, bound=BETA_BOUND, points=SCAN_POINTS):
    """Global minimiser of :func:`classical_energy` over ``[-bound, bound]``.

    A uniform scan locates the basin, bounded Brent search refines it and a
    final step snaps to the nearest real root of the stationarity quartic.
    On the line ``hx = 0`` the two mirror minima are degenerate; the
    nonnegative one is returned with ``degenerate=True``.
    """
    grid = np.linspace(-bound, bound, points)
    e = classical_energy(grid, hx, hz)
    i = int(np.argmin(e))
    if i == 0 or i == points - 1:
        raise SemiclassicalError(f"minimum at the scan boundary beta={grid[i]}; enlarge the bound")
    res = minimize_scalar(
        classical_energy, bounds=(grid[i - 1], grid[i + 1]),
        args=(hx, hz), method="bounded", options={"xatol": 1e-12},
    )
    beta = float(res.x)
    roots = _stationary_roots(hx, hz)
    if roots.size:
        nearest = roots[np.argmin(np.abs(roots - beta))]
        if abs(nearest - beta) < 1e-5 and classical_energy(nearest, hx, hz) <= classical_energy(beta, hx, hz) + 1e-15:
            beta = float(nearest)
    # on hx = 0 the minimum leaves beta = 0 only for hz < 1 (quartically flat at hz = 1)
    degenerate = hx == 0.0 and hz < 1.0 and abs(beta) > 1e-7
    if degenerate:
        beta = abs(beta)
    elif hx == 0.0:
        beta = 0.0
    return BetaMinimum(beta, float(classical_energy(beta, hx, hz)), degenerate)


def quadratic_coefficients(beta, hx, hz):
    """``(A, B)`` of the order-1 form ``A n_b + (B/2)(b+^2 + b^2)``."""
    b2 = beta * beta
    p3 = 2.0 + 3.0 * b2 + b2 * b2
    p5 = 4.0 + 5.0 * b2 + b2 * b2
    A = -(2.0 * (1.0 - 6.0 * b2) + hx * beta * p5 - 4.0 * hz * (1.0 + b2)) / (4.0 * (1.0 + b2))
    B = -(2.0 - 8.0 * b2 + hx * beta * p3) / (4.0 * (1.0 + b2))
    return A, B


def theta_ratio_opposite(beta, hx, hz):
    """Explicit ``tanh`` ratio in the opposite sign convention (equals ``-B/A``)."""
    b2 = beta * beta
    num = -2.0 + 8.0 * b2 - hx * beta * (2.0 + 3.0 * b2 + b2 * b2)
    den = 2.0 * (1.0 - 6.0 * b2) + hx * beta * (4.0 + 5.0 * b2 + b2 * b2) - 4.0 * hz * (1.0 + b2)
    return num / den


def bogoliubov_theta(beta0, hx, hz):
    """Bogoliubov angle ``T`` with ``tanh T = B/A``.

    This is the sign that removes ``c^2`` terms for the transformation
    ``c+ = cosh(T/2) b+ + sinh(T/2) b``; :func:`theta_ratio_opposite` gives
    the same magnitude with the other sign.
    """
    A, B = quadratic_coefficients(beta0, hx, hz)
    if A <= 0.0:
        raise SemiclassicalError(f"quadratic form not bounded below (A={A})")
    r = B / A
    if abs(r) >= 1.0:
        raise SemiclassicalError(f"|tanh T| = {abs(r)} >= 1: expansion breaks down (critical point?)")
    return math.atanh(r)


def xi(beta, hx, hz):
    """Squared excitation gap ``A^2 - B^2``."""
    b2 = beta * beta
    first = 2.0 - 12.0 * b2 - 4.0 * hz * (1.0 + b2) + hx * beta * (4.0 + 5.0 * b2 + b2 * b2)
    second = 2.0 - 8.0 * b2 + hx * beta * (2.0 + 3.0 * b2 + b2 * b2)
    return (first**2 - second**2) / (16.0 * (1.0 + b2) ** 2)


def cr_quoted_variant(beta0, hx, hz):
    """A commonly quoted closed form for the limit rescaled concurrence.

    It disagrees with the Bogoliubov-vacuum result and is kept for comparison
    only; returns ``nan`` when its radicand is negative
    (which happens, e.g., everywhere on ``hx = 0, hz < 1``).
    """
    b2 = beta0 * beta0
    rad = 2.0 - 10.0 * b2 - 2.0 * hz * (1.0 + b2) + hx * (3.0 + 4.0 * b2 + b2 * b2)
    if rad < 0.0:
        return float("nan")
    return 1.0 - math.sqrt(rad) / (1.0 + b2)


def classify_phase(hx, hz, tol=0.0):
    """Label of the field point in the ``(hx, hz)`` plane."""
    on_axis = abs(hx) <= tol
    if on_axis and hz < 1.0 - tol:
        return FIRST_ORDER_LINE
    if on_axis and abs(hz - 1.0) <= tol:
        return CRITICAL_POINT
    if hz < 1.0:
        return SYMMETRY_BROKEN
    return POLARIZED


@dataclass(frozen=True)
class SemiclassicalSolution:
    hx: float
    hz: float
    beta0: float
    e0: float
    theta: float
    gap: float
    cR: float
    phase: str
    degenerate: bool


def solve(hx, hz):
    """Full semiclassical solution at one field point (``hz >= 0``)."""
    if hz < 0:
        raise ValueError("hz must be nonnegative; use the pi-rotated point (-hx, -hz)")
    if hx == 0.0 and hz == 1.0:
        raise SemiclassicalError("the critical point (0, 1) is excluded: the gap closes there")
    bm = minimize_beta(hx, hz)
    theta = bogoliubov_theta(bm.beta0, hx, hz)
    A, B = quadratic_coefficients(bm.beta0, hx, hz)
    gap = math.sqrt(max(A * A - B * B, 0.0))
    cR = 1.0 - math.exp(theta) / (1.0 + bm.beta0**2)
    return SemiclassicalSolution(
        hx=float(hx), hz=float(hz), beta0=bm.beta0, e0=bm.energy, theta=theta,
        gap=gap, cR=cR, phase=classify_phase(hx, hz), degenerate=bm.degenerate,
    )


def rescaled_concurrence_limit(hx, hz):
    """Limit of ``(N-1) C`` for the uniaxial model's ground state."""
    return solve(hx, hz).cR


def rescaled_concurrence_transverse(gamma, hz):
    """Limit rescaled concurrence of ``-(S_x^2 + gamma S_y^2)/N + hz S_z``."""
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    if hz < 0:
        raise ValueError("hz must be nonnegative")
    if hz >= 1.0:
        return 1.0 - math.sqrt((hz - 1.0) / (hz - gamma))
    if hz >= math.sqrt(gamma):
        return 1.0 - math.sqrt((1.0 - hz * hz) / (1.0 - gamma))
    return 1.0 - math.sqrt((1.0 - gamma) / (1.0 - hz * hz))


def order_parameter_transverse(hz):
    """``m = 1 - 4<S_z^2>/N^2`` in the thermodynamic limit."""
    if hz < 0:
        raise ValueError("hz must be nonnegative")
    return 1.0 - hz * hz if hz < 1.0 else 0.0


def round_half_up(x):
    """Integer part rounding fractional parts in ``[1/2, 1)`` upward."""
    X = math.floor(x)
    return X + 1 if x - X >= 0.5 else X


def isotropic_ground_m(hz, N):
    """Ground-state ``M`` of ``-(S_x^2 + S_y^2)/N + hz S_z``.

    For odd ``N`` the same half-up rule is applied on the half-integer
    lattice.
    """
    if hz < 0:
        raise ValueError("hz must be nonnegative")
    if hz >= 1.0:
        return -N / 2.0
    x = hz * N / 2.0
    if N % 2 == 0:
        return -float(round_half_up(x))
    return -(round_half_up(x - 0.5) + 0.5)


def rescaled_concurrence_isotropic(hz, N):
    """``(M0, C_R)`` for the isotropic model, ``C_R = (N-1) C_z`` on ``|N/2, M0>``."""
    from .directional import directional_concurrence

    M0 = isotropic_ground_m(hz, N)
    mom = moments(dicke_state(N, M0))
    return M0, (N - 1) * directional_concurrence(mom, (0.0, 0.0, 1.0))


def richardson_derivative(f, x, steps=(1e-2, 5e-3, 2.5e-3), side=0):
    """Derivative of ``f`` at ``x`` from halving steps with Richardson extrapolation.

    ``side=0`` uses central differences, ``side=+1``/``-1`` one-sided ones.
    Returns ``(estimate, raw_differences)``.
    """
    fx = f(x)
    raw = []
    for h in steps:
        if side == 0:
            raw.append((f(x + h) - f(x - h)) / (2.0 * h))
        else:
            raw.append(side * (f(x + side * h) - fx) / h)
    raw = np.array(raw)
    order = 2 if side == 0 else 1
    table = raw.copy()
    for level in range(1, len(steps)):
        factor = (steps[0] / steps[1]) ** (order * level)
        table = (factor * table[1:] - table[:-1]) / (factor - 1.0)
    return float(table[0]), raw
