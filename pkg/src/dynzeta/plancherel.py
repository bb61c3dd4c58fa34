"""Plancherel polynomials, Casimir shifts and the alternating Plancherel sum.

P_sigma(s) is normalised so that P_sigma(lambda + rho) is the dimension of the
Spin(d+1) representation with highest weight (lambda, nu_sigma), where
rho = (d-1)/2.  Written out, with x = nu_sigma + rho_M and n = (d-1)/2,

    P_sigma(s) = dim(sigma) * prod_j (s^2 - x_j^2) / prod_{k<n} (n^2 - k^2).

It depends on x_j only through x_j^2, so it is even in s and unchanged by
the restricted Weyl flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InvariantViolation
from .repkit import (
    MIrrep,
    VirtualMRep,
    as_virtual,
    exterior_powers_of_n,
    m_root_system,
    weyl_group_order,
)


@dataclass(frozen=True)
class PlancherelPolynomial:
    """Polynomial in s with exact rational coefficients, ascending powers."""

    coeffs: tuple[Fraction, ...]
    sigma: MIrrep | None
    d: int

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs) or (Fraction(0),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else 0

    @property
    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def __call__(self, s):
        # Horner; stays exact for int/Fraction input.
        acc = 0 if isinstance(s, (int, Fraction)) else 0j
        for c in reversed(self.coeffs):
            acc = acc * s + (c if isinstance(s, (int, Fraction)) else float(c))
        return acc

    def antiderivative(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs))

    def shifted(self, t) -> "PlancherelPolynomial":
        """The polynomial s -> P(s + t) for rational t."""
        return PlancherelPolynomial(_taylor_shift(self.coeffs, Fraction(t)), self.sigma, self.d)

    def __add__(self, other: "PlancherelPolynomial") -> "PlancherelPolynomial":
        return PlancherelPolynomial(_poly_add(self.coeffs, other.coeffs), self.sigma, self.d)

    def scaled(self, k) -> "PlancherelPolynomial":
        return PlancherelPolynomial(tuple(Fraction(k) * c for c in self.coeffs), self.sigma, self.d)

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _taylor_shift(coeffs: Sequence[Fraction], t: Fraction) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * len(coeffs)
    for k, c in enumerate(coeffs):
        if c:
            for j in range(k + 1):
                out[j] += c * math.comb(k, j) * t ** (k - j)
    return tuple(out)


def _check_sigma(sigma: MIrrep, d: int) -> None:
    if sigma.d != d:
        raise DomainError(f"representation belongs to d={sigma.d}, not d={d}")


def plancherel_polynomial(sigma: MIrrep, d: int, normalization=1) -> PlancherelPolynomial:
    """P_sigma(s) as an exact polynomial of degree d-1.

    ``normalization`` multiplies the whole polynomial; it is the hook for
    conventions that differ from the compact-dimension one by a constant.
    """
    _check_sigma(sigma, d)
    n = (d - 1) // 2
    rho_m = [Fraction(n - 1 - j) for j in range(n)]
    scale = Fraction(sigma.dim) * Fraction(normalization)
    for k in range(n):
        scale /= n * n - k * k
    coeffs: tuple[Fraction, ...] = (scale,)
    for nu, r in zip(sigma.weight, rho_m):
        x = nu + r
        coeffs = _poly_mul(coeffs, (-x * x, Fraction(0), Fraction(1)))
    return PlancherelPolynomial(coeffs, sigma, d)


def virtual_plancherel_polynomial(rep: MIrrep | VirtualMRep, d: int) -> PlancherelPolynomial:
    """Sum of Plancherel polynomials of the constituents, with multiplicity."""
    rep = as_virtual(rep)
    total = PlancherelPolynomial((Fraction(0),), None, d)
    for irrep, m in rep:
        total = total + plancherel_polynomial(irrep, d).scaled(m)
    return total


def integrate_plancherel(P: PlancherelPolynomial, s):
    """Integral of P from 0 to s; exact for rational s, complex otherwise."""
    anti = PlancherelPolynomial(P.antiderivative(), P.sigma, P.d)
    if isinstance(s, (int, Fraction)):
        return anti(Fraction(s))
    return anti(complex(s))


@dataclass(frozen=True)
class CasimirShift:
    value: Fraction


def casimir_shift(sigma: MIrrep, d: int) -> CasimirShift:
    """c(sigma) = -|rho|^2 - |rho_M|^2 + |nu_sigma + rho_M|^2."""
    _check_sigma(sigma, d)
    rs = m_root_system(d)
    rho = Fraction(d - 1, 2)
    rho_m = rs.rho
    shifted = [a + b for a, b in zip(sigma.weight, rho_m)]
    return CasimirShift(-rho * rho - rs.inner(rho_m, rho_m) + rs.inner(shifted, shifted))


def alternating_plancherel_sum(sigma: MIrrep, d: int) -> PlancherelPolynomial:
    """f(s) = sum_p (-1)^p P_{Lambda^p (x) sigma}(s + rho - p); must equal (d+1) dim(sigma)."""
    _check_sigma(sigma, d)
    rho = Fraction(d - 1, 2)
    total = PlancherelPolynomial((Fraction(0),), sigma, d)
    for p, (rep, shift) in enumerate(exterior_powers_of_n(d)):
        term = virtual_plancherel_polynomial(rep.tensor(sigma), d).shifted(rho - shift)
        total = total + term.scaled((-1) ** p)
    total = PlancherelPolynomial(total.coeffs, sigma, d)
    expected = (d + 1) * sigma.dim
    if total.degree != 0 or total.coeffs[0] != expected:
        raise InvariantViolation(
            f"alternating Plancherel sum for {sigma} (d={d}) is {list(map(str, total.coeffs))}, expected constant {expected}"
        )
    return total


def euler_characteristic_L(d: int) -> int:
    """|W(Spin(d+1))| / |W(Spin(d-1))|, which equals d+1."""
    big = weyl_group_order("D", (m_root_system(d).rank + 1))
    small = weyl_group_order("D", m_root_system(d).rank)
    if big % small:
        raise InvariantViolation(f"Weyl group orders {big}, {small} do not divide")
    return big // small
