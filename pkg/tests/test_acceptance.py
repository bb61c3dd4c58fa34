"""Acceptance criteria 1-11, one test each, at the stated tolerances and time budgets.

Every test records its outcome through the ``criterion`` fixture; the
terminal summary prints one PASS/FAIL line per criterion.
"""

import math
import time
from fractions import Fraction

import numpy as np

import oracles
from cli_corpus import transcript
from dynzeta import plancherel, spectra, zetafun
from dynzeta.geodata import ConeParams, synthesize_length_spectrum, synthesize_operator_spectrum
from dynzeta.harness import (
    FAULTS,
    ExperimentConfig,
    synthesize_graded_pair,
    verify_ruelle_funceq,
    verify_selberg_funceq,
    verify_super_funceq,
    verify_symmetrized_funceq,
    wrap,
)
from dynzeta.repkit import MIrrep, root_system, weyl_dimension

H = Fraction(1, 2)


def sigmas(d):
    """Trivial, standard and one spin weight."""
    n = (d - 1) // 2
    return [MIrrep.trivial(d), MIrrep.of(d, (1,) + (0,) * (n - 1)), MIrrep.of(d, (H,) * n)]


class Clock:
    def __init__(self, budget):
        self.budget = budget
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def note(self):
        return f"{self.elapsed:.1f}s of {self.budget:g}s"


def test_c01_euler_characteristic(criterion):
    clock = Clock(1)
    values = {d: plancherel.euler_characteristic_L(d) for d in (3, 5, 7, 9, 11)}
    ok = all(v == d + 1 for d, v in values.items()) and clock.elapsed < clock.budget
    criterion(1, ok, f"values {values}; {clock.note()}")
    assert ok


def test_c02_alternating_plancherel_sum(criterion):
    clock = Clock(10)
    bad = []
    for d in (3, 5, 7):
        for sigma in sigmas(d):
            f = plancherel.alternating_plancherel_sum(sigma, d)
            if f.coeffs != (Fraction((d + 1) * sigma.dim),):
                bad.append((d, sigma.weight))
    ok = not bad and clock.elapsed < clock.budget
    criterion(2, ok, f"9 cases exact, mismatches {bad}; {clock.note()}")
    assert ok


def test_c03_plancherel_even_and_interpolating(criterion):
    clock = Clock(5)
    checked = 0
    bad = []
    for d in (3, 5, 7):
        rho = Fraction(d - 1, 2)
        big = root_system("D", (d + 1) // 2)
        for sigma in sigmas(d):
            if not sigma.is_weyl_invariant:
                continue
            P = plancherel.plancherel_polynomial(sigma, d)
            if any(c != 0 for c in P.coeffs[1::2]):
                bad.append((d, sigma.weight, "odd coefficient"))
            # Dominant points only: lambda runs from nu_1 upward.
            for k in range(4):
                lam = sigma.weight[0] + k
                checked += 1
                if P(lam + rho) != weyl_dimension(big, (lam,) + tuple(sigma.weight)):
                    bad.append((d, sigma.weight, lam))
    ok = not bad and checked > 0 and clock.elapsed < clock.budget
    criterion(3, ok, f"{checked} interpolation points, failures {bad}; {clock.note()}")
    assert ok


def test_c04_ruelle_factorization(criterion):
    clock = Clock(30)
    rng = np.random.default_rng(404)
    worst = 0.0
    for k in range(20):
        d = (3, 5)[k % 2]
        count = int(rng.integers(1, 11))
        dim_chi = int(rng.integers(1, 4))
        spec = synthesize_length_spectrum(1000 + k, count, d, dim_chi, unitary=False)
        sigma = sigmas(d)[k % 3]
        s = complex(zetafun.ruelle_abscissa(spec) + 2, rng.uniform(-3, 3))
        worst = max(worst, zetafun.ruelle_factorization_check(spec, sigma, s).residual)
    ok = worst < 1e-10 and clock.elapsed < clock.budget
    criterion(4, ok, f"max residual {worst:.2e} over 20 spectra; {clock.note()}")
    assert ok


def _random_matrix(rng, n, radius):
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return M * radius / np.max(np.abs(np.linalg.eigvals(M)))


def test_c05_symmetric_power_resummation(criterion):
    clock = Clock(30)
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(50):
        B = _random_matrix(rng, int(rng.integers(1, 4)), rng.uniform(0.2, 1.5))
        C = _random_matrix(rng, int(rng.integers(1, 4)), rng.uniform(0.05, 0.25))
        rb = np.max(np.abs(np.linalg.eigvals(B)))
        q = rng.uniform(0.1, 0.8) / rb * np.exp(1j * rng.uniform(0, 2 * np.pi))
        K = 0
        while zetafun.symmetric_product_tail_bound(B, C, q, K) >= 1e-12:
            K += 1
        brute = zetafun.log_symmetric_product(B, C, q, K)
        resummed = zetafun.log_symmetric_product_resummed(B, C, q)
        # Each brute-force factor uses a principal log, so compare modulo 2 pi i.
        worst = max(worst, abs(wrap(brute - resummed)))
    ok = worst < 1e-10 and clock.elapsed < clock.budget
    criterion(5, ok, f"max difference {worst:.2e} over 50 instances; {clock.note()}")
    assert ok


def test_c06_eta_machinery(criterion):
    clock = Clock(60)
    rng = np.random.default_rng(606)
    worst = 0.0
    angle_ok = True
    for k in range(20):
        size = int(rng.integers(1, 31))
        cone = ConeParams(kind="dirac", wide_angle=int(rng.integers(0, 4)), max_mult=2, aperture=rng.uniform(0.2, 1.5))
        spec = synthesize_operator_spectrum(2000 + k, size, "dirac", cone)
        worst = max(worst, spectra.eta_split_identity_residual(spec, math.pi, [0.5, 1.0, 2.0]))
        expected = spectra.eta_invariant(spec)
        for angle in spectra.agmon_candidates(spec):
            value = spectra.eta_result(spec, angle, [1.0]).eta_invariant
            angle_ok &= value == expected and value.imag == 0 and float(value.real).is_integer()
    ok = worst < 1e-8 and angle_ok and clock.elapsed < clock.budget
    criterion(6, ok, f"max Mellin residual {worst:.2e}, eta(0) integral and angle-independent: {angle_ok}; {clock.note()}")
    assert ok


def test_c07_determinants(criterion):
    clock = Clock(30)
    ours = spectra.regularized_determinant(spectra.ModelSpectrum("riemann"), 0)
    oracle_gap = abs(ours - float(oracles.model_determinant(1)))
    rng = np.random.default_rng(707)
    worst = 0.0
    for k in range(50):
        spec = synthesize_operator_spectrum(3000 + k, int(rng.integers(1, 40)), cone=ConeParams(max_mult=3, aperture=1.0))
        s = complex(rng.uniform(-2, 2), rng.uniform(-0.5, 0.5))
        prod = complex(np.prod((spec.eigenvalues + s * s) ** spec.multiplicities))
        worst = max(worst, abs(spectra.regularized_determinant(spec, s) - prod) / abs(prod))
    ok = oracle_gap < 1e-8 and worst < 1e-12 and clock.elapsed < clock.budget
    criterion(7, ok, f"riemann vs oracle {oracle_gap:.2e}, finite max rel {worst:.2e}; {clock.note()}")
    assert ok


def test_c08_graded_determinant(criterion):
    clock = Clock(30)
    rng = np.random.default_rng(808)
    worst = 0.0
    torsion_gap = 0.0
    for k in range(20):
        theta = rng.uniform(-1.4, -0.2)
        plus, minus = synthesize_graded_pair(4000 + k, int(rng.integers(1, 51)), theta)
        worst = max(worst, spectra.thm75_residual(plus, minus, theta))
        refined = spectra.refined_torsion(plus, minus, theta, 0, 1, 5)
        torsion_gap = max(torsion_gap, abs(refined - spectra.graded_determinant(plus, minus, theta)))
    ok = worst < 1e-9 and torsion_gap == 0 and clock.elapsed < clock.budget
    criterion(8, ok, f"max residual {worst:.2e}, refined torsion gap {torsion_gap:.1e}; {clock.note()}")
    assert ok


def test_c09_functional_equations(criterion):
    clock = Clock(120)
    tol = {"residual": 1e-8, "slope_rel": 1e-9}
    case_a = [(3, (0,)), (5, (0, 0)), (5, (1, 0))]
    case_b = [(3, (1,)), (5, (H, H)), (5, (H, -H)), (5, (1, 1))]
    failures = []
    slope_worst = 0.0
    controls = 0
    for d, w in case_a + case_b:
        cfg = dict(d=d, sigma=MIrrep.of(d, w), dim_chi=2, vol_x=1.3, seed=7 * d, tolerances=tol)
        invariant = MIrrep.of(d, w).is_weyl_invariant
        checks = [verify_ruelle_funceq]
        checks += [verify_selberg_funceq] if invariant else [verify_symmetrized_funceq, verify_super_funceq]
        for fn in checks:
            rep = fn(ExperimentConfig(**cfg))
            if not rep.passed:
                failures.append((fn.__name__, d, w))
            if fn is verify_ruelle_funceq:
                slope_worst = max(slope_worst, rep.details["slope_relative_error"])
            name = rep.experiment
            for fault in FAULTS[name]:
                controls += 1
                if fn(ExperimentConfig(**cfg, fault=fault)).passed is not False:
                    failures.append((fn.__name__, d, w, fault))
    ok = not failures and slope_worst < 1e-9 and clock.elapsed < clock.budget
    criterion(9, ok, f"{controls} fault controls, failures {failures}, slope rel err {slope_worst:.1e}; {clock.note()}")
    assert ok


def test_c10_weyl_law(criterion):
    clock = Clock(10)
    ratios = []
    for k, (d, rank, vol) in enumerate([(3, 1, 1.0), (5, 4, 2.5), (7, 8, 0.7), (9, 2, 3.0)]):
        spec = synthesize_operator_spectrum(5000 + k, 3000, cone=ConeParams(weyl=(d, rank, vol)))
        fit = spectra.weyl_law_fit(spec, d, rank, vol)
        ratios += [fit.min_ratio, fit.max_ratio]
    ok = 0.95 <= min(ratios) and max(ratios) <= 1.05 and clock.elapsed < clock.budget
    criterion(10, ok, f"top-decile ratios in [{min(ratios):.4f}, {max(ratios):.4f}]; {clock.note()}")
    assert ok


def test_c11_cli_reproducible(criterion, tmp_path):
    clock = Clock(60)
    runs = []
    for name, hash_seed in (("a", "11"), ("b", "12")):
        (tmp_path / name).mkdir()
        runs.append(transcript(tmp_path / name, hash_seed))
    first, second = runs
    ok = first == second and clock.elapsed < clock.budget
    criterion(11, ok, f"{len(first)} transcript bytes, identical: {first == second}; {clock.note()}")
    assert ok
