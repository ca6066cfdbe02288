"""Acceptance suite: one test per criterion, each reported as PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
one line per criterion together with the measured figure of merit.
"""
import math

import numpy as np
import pytest

from spinconc import semiclassical as sc
from spinconc.dicke import dicke_state, moments, random_parity_state, random_real_state, random_symmetric_state
from spinconc.directional import directional_concurrence, korbicz_witness, unit
from spinconc.eigensolve import ground_state
from spinconc.hamiltonians import (
    ModelParams,
    boson_order_parameter,
    boson_to_field,
    build_boson_hamiltonian,
    transition_point,
)
from spinconc.lab import sweeps
from spinconc.lab.exact import ground_point
from spinconc.pairwise import (
    concurrence_parity,
    concurrence_real_cubic,
    concurrence_wootters,
    reduced_two_spin,
)

TRANSVERSE_HZ = (0.25, 0.5, 0.75, 1.5, 2.0)
EXTRAPOLATION_NS = [64, 128, 256, 512, 1024]


def report(record_property, ok, detail):
    record_property("detail", detail)
    print(f"{'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.mark.criterion(1)
def test_conjecture_fuzz(record_property):
    summary, _ = sweeps.fuzz_conjecture(list(range(2, 11)), 10_000, seed=2024, tol=1e-7)
    ok = summary["failures"] == 0 and summary["trials"] == 10_000
    report(record_property, ok, f"10000 trials, {summary['failures']} failures, max gap {summary['max_gap']:.2e}")


@pytest.mark.criterion(2)
def test_route_agreement(record_property):
    parity_gap = 0.0
    for seed in range(1000):
        rho = reduced_two_spin(moments(random_parity_state(2 + seed % 9, seed, parity=seed % 2)))
        parity_gap = max(parity_gap, abs(concurrence_parity(rho) - concurrence_wootters(rho)))
    # only about one real state in ten has u > w, so draw until 1000 qualify
    cubic_gap, used, seed = 0.0, 0, 0
    while used < 1000:
        rho = reduced_two_spin(moments(random_real_state(2 + seed % 9, seed)))
        seed += 1
        res = concurrence_real_cubic(rho)
        if res.applicable:
            used += 1
            cubic_gap = max(cubic_gap, abs(res.concurrence - concurrence_wootters(rho)))
    ok = parity_gap <= 1e-9 and cubic_gap <= 1e-9
    report(record_property, ok, f"parity max gap {parity_gap:.2e}, cubic max gap {cubic_gap:.2e} ({seed} real draws)")


@pytest.mark.criterion(3)
def test_witness_equivalence(record_property):
    rng = np.random.default_rng(17)
    checked = mismatches = 0
    for seed in range(10_000):
        mom = moments(random_symmetric_state(2 + seed % 9, seed))
        n = unit(rng.standard_normal(3))
        c = directional_concurrence(mom, n)
        if abs(c) > 1e-9:
            checked += 1
            mismatches += np.sign(c) != np.sign(korbicz_witness(mom, n))
    report(record_property, mismatches == 0, f"{checked} pairs with |C_n| > 1e-9, {mismatches} sign mismatches")


@pytest.mark.criterion(4)
def test_separable_point(record_property):
    worst = 0.0
    for g in (0.25, 0.5, 0.75):
        for N in (8, 64, 256):
            hz = (N - 1) * math.sqrt(g) / N
            pt = ground_point(ModelParams.biaxial_transverse(g, hz, N), resolve="min_concurrence", directions=False)
            worst = max(worst, pt.concurrence)
    report(record_property, worst <= 1e-8, f"max concurrence {worst:.2e} over 9 (gamma, N) points")


@pytest.mark.criterion(5)
def test_transverse_closed_forms(record_property):
    worst = 0.0
    for g in (0.0, 0.5):
        for hz in TRANSVERSE_HZ:
            res = sweeps.extrapolate_point("biaxial_transverse", {"gamma": g, "hz": hz}, EXTRAPOLATION_NS)
            worst = max(worst, abs(res["C_R"].limit - sc.rescaled_concurrence_transverse(g, hz)))
    report(record_property, worst <= 1e-3, f"max |C_R(extrapolated) - closed form| = {worst:.2e}")


@pytest.mark.criterion(6)
def test_isotropic_case(record_property):
    worst = 0.0
    for N in (2, 3, 4, 7, 10, 25, 64):
        for hz in np.linspace(0.0, 1.2, 25):
            M0, cr = sc.rescaled_concurrence_isotropic(hz, N)
            ref = (N - 1) * concurrence_wootters(reduced_two_spin(moments(dicke_state(N, M0))))
            worst = max(worst, abs(cr - ref))
    edges = []
    for N in (4, 10, 64):
        _, top = sc.rescaled_concurrence_isotropic(1.0, N)
        # hz N/2 = N/2 - 1 rounds to N/2 - 1, which selects M0 = -N/2 + 1
        M0, first = sc.rescaled_concurrence_isotropic(1.0 - 2.0 / N, N)
        edges.append(abs(top) <= 1e-12 and M0 == -N / 2 + 1 and abs(first - 2 * (N - 1) / N) <= 1e-12)
    _, c4 = sc.rescaled_concurrence_isotropic(0.5, 4)
    ok = worst <= 1e-12 and all(edges) and abs(c4 - 1.5) <= 1e-12
    report(record_property, ok, f"formula vs Wootters max gap {worst:.2e}; "
           f"edge values {'ok' if all(edges) else 'wrong'}; N=4, M0=-1 gives C_R={c4:.15g}")


@pytest.mark.criterion(7)
def test_first_order_line(record_property):
    hz, eps = 0.5, 1e-3
    dc = abs(sc.rescaled_concurrence_limit(eps, hz) - sc.rescaled_concurrence_limit(-eps, hz))
    dbeta = abs(sc.minimize_beta(eps, hz).beta0 - sc.minimize_beta(-eps, hz).beta0)
    f = lambda hx: sc.rescaled_concurrence_limit(hx, hz)  # noqa: E731
    right, _ = sc.richardson_derivative(f, 1e-9, side=+1)
    left, _ = sc.richardson_derivative(f, -1e-9, side=-1)
    jump = abs(right - left)
    ok = dc <= 1e-3 and dbeta >= 1 and np.isfinite(jump) and jump > 1e-3
    report(record_property, ok,
           f"|dC_R| = {dc:.2e}, |d beta0| = {dbeta:.4f}, one-sided slopes {left:.4f} / {right:.4f}")


@pytest.mark.criterion(8)
def test_critical_divergence(record_property):
    f = lambda hz: sc.rescaled_concurrence_limit(0.0, hz)  # noqa: E731
    at_one = sc.rescaled_concurrence_transverse(0.0, 1.0)
    slopes = [abs(at_one - f(1 - h)) / h for h in (1e-2, 1e-3, 1e-4)]
    ok = slopes[0] < slopes[1] < slopes[2]
    report(record_property, ok, "backward slopes " + ", ".join(f"{s:.3f}" for s in slopes))


@pytest.mark.criterion(9)
def test_scaling_exponents(record_property):
    Ns = [2**k for k in range(7, 14)]
    crit, _ = sweeps.scaling("biaxial_transverse", {"gamma": 0.0, "hz": 1.0}, Ns, method="lanczos")
    regular, _ = sweeps.scaling("uniaxial_field", {"hx": 0.2, "hz": 0.5}, Ns, method="lanczos")
    ok = 0.28 <= crit.exponent <= 0.38 and 0.9 <= regular.exponent <= 1.1
    report(record_property, ok, f"critical exponent {crit.exponent:.4f}, off-critical exponent {regular.exponent:.4f}")


@pytest.mark.criterion(10)
def test_boson_map(record_property):
    rng = np.random.default_rng(10)
    worst = 0.0
    passed = 0
    for _ in range(20):
        x, y, N = rng.uniform(-2.0, 0.95), rng.uniform(-3.0, 3.0), int(rng.integers(2, 61))
        rep = sweeps.verify_boson_map(x, y, N)
        passed += rep.passed
        worst = max(worst, rep.max_deviation / N)
    hx_c = max(abs(boson_to_field(transition_point(y), y).hx) for y in (0.3, 1.0, 2.5))
    # first-order side: <n_t>/N jumps by |sin alpha| sqrt(1 - hz^2) across x_c
    y, N, d = 1.0, 960, 1e-4
    xc = transition_point(y)
    mp = boson_to_field(xc, y)
    nt = [boson_order_parameter(ground_state(build_boson_hamiltonian(xc + s * d, y, N))[1].amps) for s in (-1, 1)]
    jump = abs(nt[0] - nt[1])
    expected = abs(math.sin(mp.alpha)) * math.sqrt(1 - mp.hz**2)
    ok = passed == 20 and hx_c <= 1e-12 and abs(jump - expected) <= 0.01
    report(record_property, ok,
           f"{passed}/20 spectra match (max dev/N {worst:.1e}); hx(x_c) = {hx_c:.1e}; "
           f"<n_t>/N jump {jump:.4f} (limit {expected:.4f})")


@pytest.mark.criterion(11)
def test_order_parameter(record_property):
    worst = 0.0
    for g in (0.0, 0.5):
        for hz in TRANSVERSE_HZ:
            res = sweeps.extrapolate_point("biaxial_transverse", {"gamma": g, "hz": hz}, EXTRAPOLATION_NS)
            ref = 1 - hz * hz if hz < 1 else 0.0
            worst = max(worst, abs(res["m"].limit - ref))
    report(record_property, worst <= 1e-3, f"max |m(extrapolated) - reference| = {worst:.2e}")
