"""Spectral calculus on finite operator spectra.

Agmon angles, theta traces, Weyl-law counting, eta functions, xi and
generalized zeta functions (finite and hybrid small-t models), regularized
and graded determinants, and the torsions built from them.

On a finite spectrum zeta regularization is exact: det(A + s^2) is the plain
product of (lambda + s^2)^m.  The hybrid mode adds a model heat-trace tail
sum_j f a_j t^(j - d/2) e^(-kappa t) so the pole structure in z is visible.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .errors import BranchMismatchError, DomainError, NumericalError, SingularDeterminantError
from .geodata import OperatorSpectrum, weyl_constant

TWO_PI = 2.0 * math.pi


# --- Agmon angles ---------------------------------------------------------------


def _check_nonzero(spec: OperatorSpectrum) -> None:
    for lam, _ in spec.entries:
        if lam == 0:
            raise DomainError(f"spectrum {spec.label!r} contains the eigenvalue 0")


def arg_theta(z: complex, theta: float) -> float:
    """Argument of z on the branch (theta - 2 pi, theta]."""
    return theta - math.fmod(math.fmod(theta - cmath.phase(z), TWO_PI) + TWO_PI, TWO_PI)


def log_theta(z: complex, theta: float) -> complex:
    return complex(math.log(abs(z)), arg_theta(z, theta))


def _angular_distance(a: float, b: float) -> float:
    x = math.fmod(abs(a - b), TWO_PI)
    return min(x, TWO_PI - x)


def _clearance(spec: OperatorSpectrum, theta: float) -> float:
    if not spec.entries:
        return math.pi
    return min(_angular_distance(cmath.phase(lam), theta) for lam, _ in spec.entries)


@dataclass(frozen=True)
class AgmonAngle:
    theta: float
    epsilon: float

    @classmethod
    def for_spectrum(cls, spec: OperatorSpectrum, theta: float) -> "AgmonAngle":
        """Validate theta against spec; epsilon is the angular clearance of the ray."""
        _check_nonzero(spec)
        theta = math.fmod(math.fmod(theta, TWO_PI) + TWO_PI, TWO_PI)
        eps = _clearance(spec, theta)
        if eps <= 1e-12:
            raise DomainError(f"ray at angle {theta} meets the spectrum of {spec.label!r}")
        return cls(theta, eps)


def agmon_candidates(spec: OperatorSpectrum) -> list[AgmonAngle]:
    """Bisectors of the gaps between consecutive spectral arguments, sorted by angle."""
    _check_nonzero(spec)
    args = sorted({math.fmod(cmath.phase(lam) + TWO_PI, TWO_PI) for lam, _ in spec.entries})
    if not args:
        return [AgmonAngle(math.pi, math.pi)]
    out = []
    for a, b in zip(args, args[1:] + [args[0] + TWO_PI]):
        mid = math.fmod((a + b) / 2, TWO_PI)
        out.append(AgmonAngle(mid, (b - a) / 2))
    return sorted(out, key=lambda c: c.theta)


def choose_agmon_angle(spec: OperatorSpectrum) -> AgmonAngle:
    """Bisector with the largest clearance; ties go to the smaller angle."""
    cands = agmon_candidates(spec)
    best = max(c.epsilon for c in cands)
    return next(c for c in cands if c.epsilon >= best - 1e-15)


# --- traces and counting --------------------------------------------------------


def theta_trace(spec: OperatorSpectrum, t: float) -> complex:
    if not t > 0:
        raise DomainError(f"theta trace needs t > 0, got {t}")
    return complex(np.sum(spec.multiplicities * np.exp(-t * spec.eigenvalues)))


def counting_function(spec: OperatorSpectrum, c: float) -> int:
    return sum(m for lam, m in spec.entries if abs(lam) <= c)


@dataclass(frozen=True)
class WeylFit:
    K: float
    exponent: float
    c_values: tuple[float, ...]
    ratios: tuple[float, ...]

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)


def weyl_law_fit(spec: OperatorSpectrum, d: int, rank_bundle: int, vol: float) -> WeylFit:
    """N(c) / (K c^(d/2)) at every eigenvalue modulus in the top decile."""
    K = weyl_constant(d, rank_bundle, vol)
    moduli = np.sort(np.abs(spec.eigenvalues))
    if len(moduli) == 0:
        raise DomainError("Weyl-law fit needs a nonempty spectrum")
    top = moduli[int(0.9 * len(moduli)):]
    ratios = tuple(counting_function(spec, float(c)) / (K * float(c) ** (d / 2)) for c in top)
    return WeylFit(K, d / 2, tuple(float(c) for c in top), ratios)


# --- eta ------------------------------------------------------------------------------


def _eta_terms(spec: OperatorSpectrum, theta: float):
    """(base, sign, mult, in_eta0) per eigenvalue: lambda for Re > 0, -lambda for Re < 0."""
    _check_nonzero(spec)
    out = []
    for lam, m in spec.entries:
        if lam.real == 0:
            raise DomainError(f"eigenvalue {lam} on the imaginary axis is not covered by the eta function")
        base, sign = (lam, 1) if lam.real > 0 else (-lam, -1)
        if _angular_distance(cmath.phase(base), theta) <= 1e-12:
            raise DomainError(f"{base} lies on the branch cut at angle {theta}")
        out.append((base, sign, m, (lam * lam).real <= 0))
    return out


def _power_theta(base: complex, s: complex, theta: float) -> complex:
    return cmath.exp(-s * log_theta(base, theta))


def _theta_of(theta) -> float:
    return theta.theta if isinstance(theta, AgmonAngle) else float(theta)


def eta_split(spec: OperatorSpectrum, theta: AgmonAngle | float, s) -> tuple[complex, complex]:
    """(eta0(s), eta1(s)); eta0 collects eigenvalues with Re(lambda^2) <= 0."""
    th = _theta_of(theta)
    s = complex(s)
    e0 = e1 = 0j
    for base, sign, m, small in _eta_terms(spec, th):
        term = sign * m * _power_theta(base, s, th)
        if small:
            e0 += term
        else:
            e1 += term
    return e0, e1


def eta_function(spec: OperatorSpectrum, theta: AgmonAngle | float, s) -> complex:
    e0, e1 = eta_split(spec, theta, s)
    return e0 + e1


def eta_invariant(spec: OperatorSpectrum) -> int:
    """eta(0): signed count of eigenvalues by the sign of the real part."""
    return sum(sign * m for _, sign, m, _ in _eta_terms(spec, math.pi))


@dataclass(frozen=True)
class EtaResult:
    value_at: dict
    eta0: complex
    eta_invariant: complex


def eta_result(spec: OperatorSpectrum, theta: AgmonAngle | float, s_grid: Sequence[complex]) -> EtaResult:
    values = {complex(s): eta_function(spec, theta, s) for s in s_grid}
    e0, e1 = eta_split(spec, theta, 0)
    return EtaResult(values, e0, e0 + e1)


def _quad_complex(f, a, b, *, weight=None, wvar=None, epsabs, epsrel, limit=200):
    kw = {"epsabs": epsabs, "epsrel": epsrel, "limit": limit}
    if weight is not None:
        kw.update(weight=weight, wvar=wvar)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            re, err_re = integrate.quad(lambda t: f(t).real, a, b, **kw)
            im, err_im = integrate.quad(lambda t: f(t).imag, a, b, **kw)
        except integrate.IntegrationWarning as exc:
            raise NumericalError(f"quadrature on [{a}, {b}] failed: {exc}", interval=[a, b]) from None
    return complex(re, im), err_re + err_im


def _half_line_quad(f, decay: float, scale: float, power: float, tol: float, alg_weight: float | None = None):
    """integral_0^inf f(t) dt for |f(t)| <~ scale t^power e^(-decay t) at large t.

    (0, 1] is done with the algebraic weight t^alg_weight when given (f then
    excludes that factor), [1, inf) on doubling intervals until the
    exponential tail is below tol / 10.
    """
    if alg_weight is not None:
        head, err = _quad_complex(f, 0.0, 1.0, weight="alg", wvar=(alg_weight, 0.0), epsabs=tol, epsrel=tol)
        g = lambda t: f(t) * t**alg_weight  # noqa: E731
    else:
        head, err = _quad_complex(f, 0.0, 1.0, epsabs=tol, epsrel=tol)
        g = f
    total = head
    a = 1.0
    while True:
        b = 2.0 * a
        piece, e = _quad_complex(g, a, b, epsabs=tol, epsrel=tol)
        total += piece
        err += e
        # Bound on integral_b^inf scale t^power e^(-decay t) for t beyond the peak.
        tail = scale * b ** max(power, 0.0) * math.exp(-decay * b) / decay * (2.0 if power > 0 else 1.0)
        if b * decay > max(power, 0.0) * 2 and tail < tol / 10:
            return total, err
        if b > 1e7:
            raise NumericalError("half-line integral did not reach its exponential tail", decay=decay)
        a = b


def eta_mellin_term(spec: OperatorSpectrum, s, tol: float = 1e-11) -> complex:
    """(1/Gamma((s+1)/2)) integral_0^inf Tr(P+ D e^(-t D^2)) t^((s-1)/2) dt over Re(lambda^2) > 0."""
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"the Mellin representation needs Re(s) > 0, got {s}")
    lams = np.array([lam for lam, _ in spec.entries if (lam * lam).real > 0], dtype=complex)
    ms = np.array([m for lam, m in spec.entries if (lam * lam).real > 0], dtype=float)
    if len(lams) == 0:
        return 0j
    sq = lams * lams
    alpha = (s.real - 1) / 2
    beta = s.imag / 2

    def f(t):
        return complex(np.sum(ms * lams * np.exp(-t * sq))) * cmath.exp(1j * beta * math.log(t)) if t > 0 else 0j

    decay = float(np.min(sq.real))
    scale = float(np.sum(ms * np.abs(lams)))
    value, _ = _half_line_quad(f, decay, scale, alpha, tol, alg_weight=alpha)
    return complex(value * special.rgamma((s + 1) / 2))


def eta_split_identity_residual(
    spec: OperatorSpectrum, theta: AgmonAngle | float, s_grid: Sequence[complex], tol: float = 1e-11
) -> float:
    """max_s |eta(s) - eta0(s) - Mellin term|; needs the theta-branch to be principal on every base."""
    th = _theta_of(theta)
    for base, _, _, _ in _eta_terms(spec, th):
        if abs(arg_theta(base, th) - cmath.phase(base)) > 1e-12:
            raise DomainError(
                f"angle {th} puts its cut through the right half-plane; the Mellin form uses principal powers"
            )
    worst = 0.0
    for s in s_grid:
        e0, e1 = eta_split(spec, th, s)
        worst = max(worst, abs(e0 + e1 - e0 - eta_mellin_term(spec, s, tol)))
    return worst


# --- xi, generalized zeta, determinants ---------------------------------------------------


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Small-t model sum_j dim_chi_factor * coeffs[j] * t^(j - d/2)."""

    d: int
    coeffs: tuple[float, ...]
    dim_chi_factor: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if not self.coeffs:
            raise DomainError("asymptotic expansion needs at least one coefficient")
        if self.d < 3 or self.d % 2 == 0:
            raise DomainError(f"d must be odd and >= 3, got {self.d}")


def _shifted(spec: OperatorSpectrum, s) -> tuple[np.ndarray, np.ndarray]:
    s2 = complex(s) ** 2
    return spec.eigenvalues + s2, spec.multiplicities


def _tail_param(s, kappa: float) -> complex:
    return complex(s) ** 2 + kappa


def _hybrid_args(asym, mode, s, kappa):
    if mode not in ("finite", "hybrid"):
        raise DomainError(f"unknown mode {mode!r}")
    if mode == "hybrid":
        if asym is None:
            raise DomainError("hybrid mode needs an AsymptoticExpansion")
        u = _tail_param(s, kappa)
        if not u.real > 0:
            raise DomainError(f"hybrid tail needs Re(s^2 + kappa) > 0, got {u}")
        return u
    return None


def xi_function(
    spec: OperatorSpectrum,
    z,
    s,
    asym: AsymptoticExpansion | None = None,
    mode: str = "finite",
    kappa: float = 0.0,
) -> complex:
    """xi(z, s) = integral_0^inf e^(-t s^2) theta(t) t^(z-1) dt in closed form."""
    z = complex(z)
    u = _hybrid_args(asym, mode, s, kappa)
    mus, ms = _shifted(spec, s)
    if np.any(mus.real <= 0):
        raise DomainError("some lambda + s^2 has Re <= 0; the Mellin integral diverges")
    g = special.gamma(z)
    if not np.isfinite(g):
        raise DomainError(f"z = {z} is a pole of Gamma")
    value = complex(g * np.sum(ms * mus ** (-z)))
    if u is not None:
        for j, a in enumerate(asym.coeffs):
            w = z + j - asym.d / 2
            gw = special.gamma(w)
            if not np.isfinite(gw):
                raise DomainError(f"z = {z} is a pole of the hybrid tail (j = {j})")
            value += asym.dim_chi_factor * a * gw * u ** (asym.d / 2 - j - z)
    return value


def generalized_zeta(
    spec: OperatorSpectrum,
    z,
    s,
    asym: AsymptoticExpansion | None = None,
    mode: str = "finite",
    kappa: float = 0.0,
) -> complex:
    """zeta(z, s) = xi(z, s) / Gamma(z), continued through z = 0."""
    z = complex(z)
    u = _hybrid_args(asym, mode, s, kappa)
    mus, ms = _shifted(spec, s)
    value = complex(np.sum(ms * mus ** (-z)))
    if u is not None:
        for j, a in enumerate(asym.coeffs):
            value += asym.dim_chi_factor * a * special.gamma(z + j - asym.d / 2) * special.rgamma(z) * u ** (asym.d / 2 - j - z)
    return value


def xi_residue(asym: AsymptoticExpansion, j: int, s, kappa: float = 0.0) -> complex:
    """Residue of the hybrid xi function at z = d/2 - j."""
    u = _tail_param(s, kappa)
    return complex(
        sum(
            asym.dim_chi_factor * asym.coeffs[i] * (-u) ** (j - i) / math.factorial(j - i)
            for i in range(min(j, len(asym.coeffs) - 1) + 1)
        )
    )


@dataclass(frozen=True)
class ModelSpectrum:
    """Infinite model spectrum with closed-form zeta data.

    "riemann": lambda_k = k, k >= 1.  "harmonic": lambda_k = k + 1/2, k >= 0.
    Both are Hurwitz zeta functions, so det(A + s^2) = sqrt(2 pi) / Gamma(a).
    """

    name: str

    def __post_init__(self):
        if self.name not in ("riemann", "harmonic"):
            raise DomainError(f"unknown model spectrum {self.name!r}")

    @property
    def offset(self) -> float:
        return 1.0 if self.name == "riemann" else 0.5

    def eigenvalues(self, count: int) -> np.ndarray:
        return np.arange(count) + self.offset


def log_determinant(
    spec: OperatorSpectrum | ModelSpectrum,
    s,
    asym: AsymptoticExpansion | None = None,
    mode: str = "finite",
    kappa: float = 0.0,
) -> complex:
    """log det(A + s^2) = -d/dz zeta(z, s) at z = 0, principal log per eigenvalue."""
    if isinstance(spec, ModelSpectrum):
        a = spec.offset + complex(s) ** 2
        if a.imag == 0 and a.real <= 0 and a.real == round(a.real):
            raise SingularDeterminantError(f"model {spec.name}: lambda + s^2 = 0 at s = {s}")
        return complex(0.5 * math.log(TWO_PI) - special.loggamma(a))
    u = _hybrid_args(asym, mode, s, kappa)
    mus, ms = _shifted(spec, s)
    if np.any(mus == 0):
        raise SingularDeterminantError(f"lambda + s^2 = 0 at s = {s}", s=[complex(s).real, complex(s).imag])
    value = complex(np.sum(ms * np.log(mus)))
    if u is not None:
        for j, a in enumerate(asym.coeffs):
            value -= asym.dim_chi_factor * a * special.gamma(j - asym.d / 2) * u ** (asym.d / 2 - j)
    return value


def regularized_determinant(spec: OperatorSpectrum | ModelSpectrum, s, **kw) -> complex:
    return cmath.exp(log_determinant(spec, s, **kw))


def winding(log_value: complex) -> int:
    """How many 2 pi i the summed logarithm sits away from the principal log of its exponential."""
    return round((log_value.imag - cmath.phase(cmath.exp(log_value))) / TWO_PI)


# --- graded determinant, its phase identity, torsions ---------------------------------


def log_det_theta(spec: OperatorSpectrum, theta: AgmonAngle | float) -> complex:
    _check_nonzero(spec)
    th = _theta_of(theta)
    return sum((m * log_theta(lam, th) for lam, m in spec.entries), 0j)


def log_graded_determinant(spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta) -> complex:
    return log_det_theta(spec_plus, theta) - log_det_theta(spec_minus, theta)


def graded_determinant(spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta) -> complex:
    """det_theta(B+) / det_theta(B-)."""
    return cmath.exp(log_graded_determinant(spec_plus, spec_minus, theta))


def torsion_xi(spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta) -> complex:
    """xi = (1/2) [log det_{2 theta}(B+^2) - log det_{2 theta}(B-^2)]."""
    th2 = 2 * _theta_of(theta)
    plus = sum((m * log_theta(lam * lam, th2) for lam, m in spec_plus.entries), 0j)
    minus = sum((m * log_theta(lam * lam, th2) for lam, m in spec_minus.entries), 0j)
    return 0.5 * (plus - minus)


@dataclass(frozen=True)
class Thm75Check:
    lhs: complex
    rhs: complex
    residual: float
    xi: complex
    eta: int
    winding: int


def _check_thm75_angle(spec_plus, spec_minus, th: float) -> None:
    if not -math.pi / 2 < th < 0:
        raise DomainError(f"angle must lie in (-pi/2, 0), got {th}")
    for spec in (spec_plus, spec_minus):
        _check_nonzero(spec)
        for lam, _ in spec.entries:
            a = cmath.phase(lam)
            if -math.pi / 2 < a <= th or math.pi / 2 < a <= th + math.pi or abs(lam.real) == 0:
                raise DomainError(f"eigenvalue {lam} lies in the sector excluded for angle {th}")


def thm75_check(spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta) -> Thm75Check:
    """Compare det_gr with e^xi e^(-i pi eta), eta taken over both spectra.

    Both sides are sums of logarithms; their difference must be an integer
    multiple of 2 pi i.  A half-integer multiple means the branch conventions
    disagree and is reported as an error, not as a large residual.
    """
    th = _theta_of(theta)
    _check_thm75_angle(spec_plus, spec_minus, th)
    L = log_graded_determinant(spec_plus, spec_minus, th)
    xi = torsion_xi(spec_plus, spec_minus, th)
    eta = eta_invariant(spec_plus.union(spec_minus))
    delta = (L - xi + 1j * math.pi * eta) / (2j * math.pi)
    k = round(delta.real)
    if abs(delta - k) > 1e-6:
        raise BranchMismatchError(
            f"log det_gr and xi - i pi eta differ by {delta} * 2 pi i", delta=[delta.real, delta.imag]
        )
    lhs = cmath.exp(L)
    rhs = cmath.exp(xi - 1j * math.pi * eta)
    return Thm75Check(lhs, rhs, abs(lhs - rhs), xi, eta, k)


def thm75_residual(spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta) -> float:
    return thm75_check(spec_plus, spec_minus, theta).residual


def rs_torsion(laplace_spectra: Sequence[OperatorSpectrum]) -> float:
    """prod_p det(Delta_p)^(-p (-1)^p / 2) over degrees p = 0..d."""
    log_t = 0.0
    for p, spec in enumerate(laplace_spectra):
        for lam, _ in spec.entries:
            if lam.imag != 0 or lam.real <= 0:
                raise DomainError(f"degree {p}: Laplace eigenvalue {lam} is not positive real")
        log_t += -0.5 * p * (-1) ** p * float(np.sum(spec.multiplicities * np.log(spec.eigenvalues.real)))
    return math.exp(log_t)


def refined_torsion(
    spec_plus: OperatorSpectrum, spec_minus: OperatorSpectrum, theta, eta_triv: complex, rank: int, d: int
) -> complex:
    """det_gr * e^(i pi rank eta_triv)."""
    if d % 4 == 1 and eta_triv != 0:
        raise DomainError(f"for d = {d} = 1 mod 4 the trivial eta invariant vanishes; got {eta_triv}")
    return graded_determinant(spec_plus, spec_minus, theta) * cmath.exp(1j * math.pi * rank * complex(eta_triv))


def torsion_modulus_residual(
    spec_plus: OperatorSpectrum,
    spec_minus: OperatorSpectrum,
    theta,
    laplace_spectra: Sequence[OperatorSpectrum],
    eta_triv: complex,
    rank: int,
    d: int,
) -> float:
    """| |T^C| - T^RS e^(pi Im eta(B)) e^(-pi rank Im eta_triv) |, relative to T^RS."""
    tc = refined_torsion(spec_plus, spec_minus, theta, eta_triv, rank, d)
    trs = rs_torsion(laplace_spectra)
    eta_b = eta_invariant(spec_plus.union(spec_minus))
    expected = trs * math.exp(math.pi * complex(eta_b).imag - math.pi * rank * complex(eta_triv).imag)
    return abs(abs(tc) - expected) / expected
