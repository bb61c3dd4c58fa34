import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

import oracles
from dynzeta.errors import BranchMismatchError, DomainError, SingularDeterminantError
from dynzeta.geodata import ConeParams, OperatorSpectrum, synthesize_operator_spectrum
from dynzeta.harness import synthesize_graded_pair
from dynzeta.spectra import (
    AgmonAngle,
    AsymptoticExpansion,
    ModelSpectrum,
    agmon_candidates,
    arg_theta,
    choose_agmon_angle,
    eta_function,
    eta_invariant,
    eta_result,
    eta_split,
    eta_split_identity_residual,
    generalized_zeta,
    graded_determinant,
    log_determinant,
    refined_torsion,
    regularized_determinant,
    rs_torsion,
    theta_trace,
    thm75_check,
    weyl_law_fit,
    winding,
    xi_function,
    xi_residue,
)

seeds = st.integers(0, 2**31)


@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3), st.floats(-10, 10))
def test_arg_theta_branch(z, theta):
    a = arg_theta(z, theta)
    assert theta - 2 * math.pi - 1e-9 < a <= theta + 1e-9
    assert abs(cmath.exp(1j * a) - z / abs(z)) < 1e-9


def test_agmon_choice_widest_gap():
    spec = OperatorSpectrum.from_values([1, 1j, -1])
    best = choose_agmon_angle(spec)
    assert best.theta == pytest.approx(1.5 * math.pi)
    assert best.epsilon == pytest.approx(math.pi / 2)


def test_agmon_tie_goes_to_smaller_angle():
    spec = OperatorSpectrum.from_values([1, -1])
    assert choose_agmon_angle(spec).theta == pytest.approx(math.pi / 2)
    assert len(agmon_candidates(spec)) == 2


def test_agmon_ray_through_spectrum_rejected():
    spec = OperatorSpectrum.from_values([1j, 2])
    with pytest.raises(DomainError):
        AgmonAngle.for_spectrum(spec, math.pi / 2)
    with pytest.raises(DomainError):
        AgmonAngle.for_spectrum(OperatorSpectrum.from_values([0, 1]), 1.0)


def test_theta_trace():
    spec = OperatorSpectrum(((1, 2), (2 + 1j, 1)))
    assert theta_trace(spec, 0.5) == pytest.approx(2 * math.exp(-0.5) + cmath.exp(-0.5 * (2 + 1j)))
    with pytest.raises(DomainError):
        theta_trace(spec, 0)


def test_eta_invariant_signed_count():
    spec = OperatorSpectrum(((1 + 1j, 2), (-2, 1), (3, 1), (-0.5 + 4j, 3)))
    assert eta_invariant(spec) == 2 - 1 + 1 - 3


def test_eta_rejects_imaginary_axis():
    with pytest.raises(DomainError):
        eta_invariant(OperatorSpectrum.from_values([1j, 2]))


def test_eta_split_sorts_by_square():
    spec = OperatorSpectrum.from_values([1.0, 1 + 2j, -3.0])
    e0, e1 = eta_split(spec, -math.pi / 2, 1.0)
    assert e0 == pytest.approx(1 / (1 + 2j))
    assert e1 == pytest.approx(1 - 1 / 3)


def dirac(seed, size, wide=0):
    return synthesize_operator_spectrum(seed, size, "dirac", ConeParams(kind="dirac", wide_angle=wide, max_mult=2))


@settings(max_examples=8)
@given(seeds, st.integers(1, 30), st.integers(0, 3))
def test_mellin_split_identity(seed, size, wide):
    spec = dirac(seed, size, wide)
    assert eta_split_identity_residual(spec, math.pi, [0.5, 1.0, 2.0 + 0.5j]) < 1e-8


def test_mellin_needs_principal_branch():
    spec = OperatorSpectrum.from_values([1 - 0.1j, -2])
    with pytest.raises(DomainError):
        eta_split_identity_residual(spec, -0.05, [1.0])


@given(seeds, st.integers(1, 40), st.floats(0.05, 2 * math.pi - 0.05))
def test_eta_invariant_is_angle_independent_integer(seed, size, theta):
    spec = dirac(seed, size, 2)
    try:
        angle = AgmonAngle.for_spectrum(spec, theta)
    except DomainError:
        return
    value = eta_result(spec, angle, [1.0]).eta_invariant
    assert value == eta_invariant(spec)
    assert value.imag == 0 and value.real == round(value.real)


def test_eta_function_value():
    spec = OperatorSpectrum.from_values([2.0, -0.5])
    assert eta_function(spec, math.pi, 1.0) == pytest.approx(0.5 - 2.0)


def test_riemann_model_oracle():
    ours = regularized_determinant(ModelSpectrum("riemann"), 0)
    ref = float(oracles.model_determinant(1))
    assert abs(ours - ref) < 1e-8
    assert abs(ours - oracles.SQRT_2PI) < 1e-12


@pytest.mark.parametrize("s", [0.0, 0.5, 1.3])
def test_harmonic_model_oracle(s):
    ours = regularized_determinant(ModelSpectrum("harmonic"), s)
    assert abs(ours - complex(oracles.model_determinant(0.5, s))) < 1e-10


def test_model_singular():
    with pytest.raises(SingularDeterminantError):
        log_determinant(ModelSpectrum("riemann"), 1j)


@given(seeds, st.integers(1, 30), st.complex_numbers(max_magnitude=2))
def test_finite_determinant_is_product(seed, size, s):
    spec = synthesize_operator_spectrum(seed, size, cone=ConeParams(max_mult=3, shift=0.3))
    prod = complex(np.prod((spec.eigenvalues + s * s) ** spec.multiplicities))
    if prod == 0:
        return
    assert abs(regularized_determinant(spec, s) - prod) <= 1e-12 * abs(prod)


def test_finite_singular():
    spec = OperatorSpectrum.from_values([4.0])
    with pytest.raises(SingularDeterminantError):
        log_determinant(spec, 2j)


def test_winding():
    assert winding(complex(0, 3 * math.pi)) == 1
    assert winding(complex(0, -0.5)) == 0


ASYM = AsymptoticExpansion(3, (0.7, -0.2, 0.05))


def test_xi_matches_mellin_integral():
    spec = OperatorSpectrum(((1.5, 1), (2 + 0.5j, 2)))
    z, s = 0.8 + 0.3j, 0.7
    f = lambda t, part: getattr(math.exp(-t * s * s) * theta_trace(spec, t) * t ** (z - 1), part)
    ref = complex(*(integrate.quad(f, 0, np.inf, args=(p,), epsabs=1e-13)[0] for p in ("real", "imag")))
    assert abs(xi_function(spec, z, s) - ref) < 1e-9


def test_hybrid_log_det_is_minus_zeta_prime():
    spec = OperatorSpectrum(((1.5, 1), (2 + 0.5j, 2)))
    s = 0.9
    h = 1e-5
    deriv = (generalized_zeta(spec, h, s, ASYM, "hybrid") - generalized_zeta(spec, -h, s, ASYM, "hybrid")) / (2 * h)
    assert abs(log_determinant(spec, s, ASYM, "hybrid") + deriv) < 1e-8


@pytest.mark.parametrize("j", [0, 1])
def test_xi_residue_by_contour(j):
    spec = OperatorSpectrum.from_values([2.0])
    s, r = 0.6, 0.1
    pole = 1.5 - j

    def integrand(phi, part):
        z = pole + r * cmath.exp(1j * phi)
        return getattr(xi_function(spec, z, s, ASYM, "hybrid") * 1j * r * cmath.exp(1j * phi), part)

    val = complex(*(integrate.quad(integrand, 0, 2 * math.pi, args=(p,), epsabs=1e-13)[0] for p in ("real", "imag")))
    assert abs(val / (2j * math.pi) - xi_residue(ASYM, j, s)) < 1e-9


def test_hybrid_needs_expansion():
    spec = OperatorSpectrum.from_values([2.0])
    with pytest.raises(DomainError):
        log_determinant(spec, 1.0, mode="hybrid")
    with pytest.raises(DomainError):
        xi_function(spec, 0.5, 1.0, mode="other")


@given(seeds, st.integers(1, 50), st.floats(-1.4, -0.2))
def test_graded_identity_property(seed, size, theta):
    plus, minus = synthesize_graded_pair(seed, size, theta)
    check = thm75_check(plus, minus, theta)
    assert check.residual < 1e-9
    assert check.eta == eta_invariant(plus.union(minus))


def test_graded_identity_angle_checks():
    plus = OperatorSpectrum.from_values([1 + 1j])
    minus = OperatorSpectrum.from_values([2 + 0.5j])
    with pytest.raises(DomainError):
        thm75_check(plus, minus, 0.3)
    with pytest.raises(DomainError):
        thm75_check(OperatorSpectrum.from_values([1 - 1j]), minus, -math.pi / 4)


def test_graded_identity_odd_negative_count_is_branch_mismatch():
    plus = OperatorSpectrum.from_values([1 + 1j])
    minus = OperatorSpectrum.from_values([-1 - 0.5j])
    with pytest.raises(BranchMismatchError):
        thm75_check(plus, minus, -math.pi / 4)


def test_refined_torsion_equals_graded_determinant():
    plus, minus = synthesize_graded_pair(5, 20)
    theta = -math.pi / 4
    assert refined_torsion(plus, minus, theta, 0, 3, 5) == graded_determinant(plus, minus, theta)
    with pytest.raises(DomainError):
        refined_torsion(plus, minus, theta, 1, 3, 5)
    phase = refined_torsion(plus, minus, theta, 0.5, 1, 7) / graded_determinant(plus, minus, theta)
    assert phase == pytest.approx(1j)


def test_rs_torsion_formula():
    specs = [OperatorSpectrum.from_values(v) for v in ([2.0], [3.0], [5.0], [7.0])]
    expected = 3.0**0.5 * 5.0**-1 * 7.0**1.5
    assert rs_torsion(specs) == pytest.approx(expected)
    with pytest.raises(DomainError):
        rs_torsion([OperatorSpectrum.from_values([1j])])


@pytest.mark.parametrize("d,rank", [(3, 1), (5, 4), (7, 2)])
def test_weyl_law_ratio(d, rank):
    spec = synthesize_operator_spectrum(1, 2000, cone=ConeParams(weyl=(d, rank, 2.0)))
    fit = weyl_law_fit(spec, d, rank, 2.0)
    assert 0.95 <= fit.min_ratio and fit.max_ratio <= 1.05


def test_hurwitz_oracle_self_check():
    # The oracle against mpmath's own Hurwitz derivative, at a generic offset.
    with mpmath.workdps(40):
        a = mpmath.mpf("1.37")
        assert abs(oracles.hurwitz_zeta_prime_at_zero(a) - mpmath.zeta(0, a, 1)) < 1e-25
