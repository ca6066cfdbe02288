import math

import numpy as np
import pytest

from spinconc import semiclassical as sc


def frame(beta):
    """Bloch angle of the classical spin, (sin, cos)."""
    b2 = beta * beta
    return 2 * beta / (1 + b2), (b2 - 1) / (1 + b2)


def rotated_frame_oracle(hx, hz, beta):
    """Holstein-Primakoff expansion about the classical spin direction.

    With the spin along (sin t, 0, cos t) the quadratic Hamiltonian is
    (k - c^2/2) a+a - (c^2/4)(a^2 + a+^2), k = s^2 - hx s - hz c; the
    vacuum gives 4<S_y^2>/N = sqrt(1 - c^2/k).
    """
    s, c = frame(beta)
    k = s * s - hx * s - hz * c
    return math.sqrt(k * (k - c * c)), 1 - math.sqrt(1 - c * c / k)


def mean_field_energy(beta, hx, hz):
    s, c = frame(beta)
    return -s * s / 4 + hx * s / 2 + hz * c / 2


def test_classical_energy_matches_mean_field():
    rng = np.random.default_rng(0)
    for beta, hx, hz in rng.uniform(-3, 3, (50, 3)):
        assert sc.classical_energy(beta, hx, hz) == pytest.approx(mean_field_energy(beta, hx, hz), abs=1e-14)
    assert sc.classical_energy(0.0, 0.3, 0.7) == pytest.approx(-0.35)


def test_classical_energy_zero_field_minimum():
    bm = sc.minimize_beta(0.0, 0.0)
    assert bm.beta0 == pytest.approx(1.0, abs=1e-10)
    assert bm.energy == pytest.approx(-0.25, abs=1e-14)
    assert bm.degenerate


@pytest.mark.parametrize("hz", [0.0, 0.2, 0.5, 0.9])
def test_beta_on_first_order_line(hz):
    bm = sc.minimize_beta(0.0, hz)
    assert bm.beta0**2 == pytest.approx((1 - hz) / (1 + hz), abs=1e-10)
    assert bm.degenerate and bm.beta0 >= 0


@pytest.mark.parametrize("hz", [1.0, 1.3, 3.0])
def test_beta_vanishes_in_polarized_region(hz):
    assert sc.minimize_beta(0.0, hz).beta0 == 0.0


def test_beta_is_odd_in_hx_and_jumps():
    for hx, hz in [(0.1, 0.3), (0.4, 1.5), (1e-3, 0.5)]:
        assert sc.minimize_beta(-hx, hz).beta0 == pytest.approx(-sc.minimize_beta(hx, hz).beta0, abs=1e-10)
    jump = sc.minimize_beta(1e-3, 0.5).beta0 - sc.minimize_beta(-1e-3, 0.5).beta0
    assert abs(jump) == pytest.approx(2 / math.sqrt(3), abs=1e-2)


def test_beta_is_global_minimum():
    grid = np.linspace(-10, 10, 200001)
    for hx, hz in [(0.3, 0.2), (-0.8, 1.1), (0.05, 0.9), (1.5, 0.0)]:
        bm = sc.minimize_beta(hx, hz)
        assert bm.energy <= sc.classical_energy(grid, hx, hz).min() + 1e-14


def test_beta_square_continuous_across_axis():
    for hz in (0.2, 0.6):
        a = sc.minimize_beta(1e-6, hz).beta0 ** 2
        b = sc.minimize_beta(-1e-6, hz).beta0 ** 2
        assert a == pytest.approx(b, abs=1e-5)


def test_theta_examples():
    assert math.tanh(abs(sc.bogoliubov_theta(0.0, 0.0, 2.0))) == pytest.approx(1 / 3)
    assert abs(sc.bogoliubov_theta(0.0, 0.0, 1e6)) < 1e-6
    with pytest.raises(sc.SemiclassicalError):
        sc.bogoliubov_theta(0.0, 0.0, 1.0)


def test_opposite_ratio_sign():
    for hx, hz in [(0.0, 2.0), (0.3, 0.4), (-0.2, 1.4)]:
        b = sc.minimize_beta(hx, hz).beta0
        A, B = sc.quadratic_coefficients(b, hx, hz)
        assert sc.theta_ratio_opposite(b, hx, hz) == pytest.approx(-B / A, abs=1e-14)
    # substitution at hx=0, beta=0: -2 / (2 - 4 hz)
    assert sc.theta_ratio_opposite(0.0, 0.0, 2.0) == pytest.approx(-2 / (2 - 8))


@pytest.mark.parametrize("hx,hz", [(0.2, 0.5), (-0.4, 0.3), (0.7, 1.2), (0.01, 0.95), (-1.5, 0.0), (0.0, 2.0), (0.0, 0.4)])
def test_against_rotated_frame_oracle(hx, hz):
    sol = sc.solve(hx, hz)
    gap, cr = rotated_frame_oracle(hx, hz, sol.beta0)
    assert sol.gap == pytest.approx(gap, abs=1e-10)
    assert sol.cR == pytest.approx(cr, abs=1e-10)
    assert sc.xi(sol.beta0, hx, hz) == pytest.approx(gap * gap, abs=1e-10)
    assert 0 <= sol.cR <= 1
    assert abs(math.tanh(sol.theta)) < 1


@pytest.mark.parametrize("hz", [0.0, 0.25, 0.5, 0.75, 0.99, 1.01, 1.5, 2.0, 5.0])
def test_axis_reduces_to_transverse_closed_form(hz):
    assert sc.rescaled_concurrence_limit(0.0, hz) == pytest.approx(sc.rescaled_concurrence_transverse(0.0, hz), abs=1e-10)


def test_limit_examples():
    assert sc.rescaled_concurrence_limit(0.0, 0.0) == pytest.approx(0, abs=1e-12)
    assert sc.rescaled_concurrence_limit(0.0, 1.5) == pytest.approx(1 - math.sqrt(0.5 / 1.5))
    assert sc.rescaled_concurrence_limit(0.0, 0.5) == pytest.approx(1 - math.sqrt(0.75))


def test_tie_break_is_observable_neutral():
    hz = 0.5
    b = sc.minimize_beta(0.0, hz).beta0
    assert sc.quadratic_coefficients(b, 0.0, hz) == pytest.approx(sc.quadratic_coefficients(-b, 0.0, hz))


def test_continuity_and_finite_derivative_jump():
    hz = 0.5
    for eps in (1e-2, 1e-3, 1e-4):
        assert abs(sc.rescaled_concurrence_limit(eps, hz) - sc.rescaled_concurrence_limit(-eps, hz)) < 10 * eps
    f = lambda hx: sc.rescaled_concurrence_limit(hx, hz)  # noqa: E731
    right, _ = sc.richardson_derivative(f, 1e-9, side=+1)
    left, _ = sc.richardson_derivative(f, -1e-9, side=-1)
    assert np.isfinite(right) and np.isfinite(left)
    assert abs(right - left) > 1e-2


def test_derivative_diverges_at_critical_point():
    f = lambda hz: sc.rescaled_concurrence_limit(0.0, hz)  # noqa: E731
    slopes = [abs((f(1 - h) - f(1 - 2 * h)) / h) for h in (1e-2, 1e-3, 1e-4)]
    assert slopes[0] < slopes[1] < slopes[2]


def test_gap_closes_at_critical_point():
    gaps = [sc.solve(0.0, 1 + d).gap for d in (1e-1, 1e-2, 1e-3)]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.05
    with pytest.raises(sc.SemiclassicalError):
        sc.solve(0.0, 1.0)
    with pytest.raises(ValueError):
        sc.solve(0.1, -0.5)


def test_quoted_variant_radicand_negative_on_axis():
    b = sc.minimize_beta(0.0, 0.5).beta0
    assert math.isnan(sc.cr_quoted_variant(b, 0.0, 0.5))


def test_transverse_examples():
    for g in (0.0, 0.3, 0.8):
        assert sc.rescaled_concurrence_transverse(g, 1.0) == pytest.approx(1.0)
        assert sc.rescaled_concurrence_transverse(g, math.sqrt(g)) == pytest.approx(0.0, abs=1e-12)
    assert sc.rescaled_concurrence_transverse(0.0, 2.0) == pytest.approx(1 - 1 / math.sqrt(2))
    with pytest.raises(ValueError):
        sc.rescaled_concurrence_transverse(1.0, 0.5)


def test_isotropic_examples():
    assert sc.rescaled_concurrence_isotropic(1.2, 10) == (-5.0, pytest.approx(0.0, abs=1e-12))
    M0, cr = sc.rescaled_concurrence_isotropic(0.5, 4)
    assert M0 == -1.0 and cr == pytest.approx(1.5)
    _, cr = sc.rescaled_concurrence_isotropic(1e-9, 2000)
    assert cr == pytest.approx(1.0, abs=1e-3)


def test_isotropic_m0_minimises_energy():
    # E(M) = -(S(S+1) - M^2)/N + hz M over the Dicke ladder
    for N in (6, 7, 20, 21):
        S = N / 2
        M = np.arange(N + 1) - S
        for hz in np.linspace(0.0, 1.3, 27):
            E = -(S * (S + 1) - M**2) / N + hz * M
            m0 = sc.isotropic_ground_m(hz, N)
            assert E[int(m0 + S)] <= E.min() + 1e-12


def test_round_half_up():
    assert [sc.round_half_up(v) for v in (0.2, 0.5, 1.49, 1.5, 2.99)] == [0, 1, 1, 2, 3]


def test_order_parameter():
    assert sc.order_parameter_transverse(0.0) == 1
    assert sc.order_parameter_transverse(0.5) == 0.75
    assert sc.order_parameter_transverse(2.0) == 0


def test_classify_phase():
    assert sc.classify_phase(0.0, 0.5) == sc.FIRST_ORDER_LINE
    assert sc.classify_phase(0.0, 1.0) == sc.CRITICAL_POINT
    assert sc.classify_phase(0.3, 1.7) == sc.POLARIZED
    assert sc.classify_phase(0.3, 0.4) == sc.SYMMETRY_BROKEN


def test_richardson_derivative_on_smooth_function():
    est, raw = sc.richardson_derivative(np.sin, 0.4)
    assert est == pytest.approx(math.cos(0.4), abs=1e-12)
    est, _ = sc.richardson_derivative(np.exp, 0.1, side=+1)
    assert est == pytest.approx(math.exp(0.1), abs=1e-7)
    assert len(raw) == 3
