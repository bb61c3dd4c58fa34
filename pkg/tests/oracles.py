"""Independent reference values and slow reference implementations for the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import mpmath

# -sum_n e^{-4n} / (n (1 - e^{-n})^2): one geodesic of length 1, d = 3, zero
# holonomy, trivial twist, s = 3; evaluated with mpmath at 40 digits.
SELBERG_SINGLE_L1_S3 = -0.04606428328780049355707678759798059
# log(1 - e^{-3}).
RUELLE_SINGLE_L1_S3 = -0.05106918094270158653872374052225925
SQRT_2PI = 2.5066282746310005024157652848110453


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from the standard recurrence."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(Fraction(mpmath_binom(m + 1, k)) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def mpmath_binom(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def hurwitz_zeta_prime_at_zero(a, N: int = 40, J: int = 20, dps: int = 40):
    """d/dz zeta_H(z, a) at z = 0 by Euler-Maclaurin with cutoff N and J Bernoulli terms."""
    with mpmath.workdps(dps):
        a = mpmath.mpmathify(a)
        x = N + a
        value = -sum(mpmath.log(k + a) for k in range(N))
        value += x * mpmath.log(x) - x - mpmath.log(x) / 2
        for j in range(1, J + 1):
            b = bernoulli(2 * j)
            value += mpmath.mpf(b.numerator) / b.denominator / (2 * j * (2 * j - 1)) * x ** (1 - 2 * j)
        return value


def model_determinant(offset, s=0, **kw):
    """exp(-zeta'(0)) for the spectrum {k + offset + s^2 : k >= 0}."""
    return mpmath.exp(-hurwitz_zeta_prime_at_zero(mpmath.mpf(offset) + mpmath.mpf(s) ** 2, **kw))


def selberg_direct_product(lengths, angles, chi, weights, s, rho, K: int = 60, dps: int = 30):
    """log prod_gamma prod_{k <= K} det(1 - sigma(m) chi(gamma) S^k(Ad(m a)|n) e^{-(s+rho) l}).

    Eigenvalues are enumerated explicitly: every weight phase, twist eigenvalue
    and degree-k monomial in the 2r eigenvalues e^{-l +- i theta_j}.  No
    resummation, so this is an independent route to log Z.
    """
    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        s = mpmath.mpc(s)
        for l, th, ch in zip(lengths, angles, chi):
            l = mpmath.mpf(l)
            ad = []
            for t in th:
                ad += [mpmath.exp(-l + 1j * mpmath.mpf(t)), mpmath.exp(-l - 1j * mpmath.mpf(t))]
            base = mpmath.exp(-(s + rho) * l)
            phases = [mpmath.exp(1j * sum(mpmath.mpf(float(w)) * mpmath.mpf(t) for w, t in zip(wt, th))) for wt in weights]
            mults = list(weights.values())
            for k in range(K + 1):
                for mono in itertools.combinations_with_replacement(range(len(ad)), k):
                    sym = mpmath.mpf(1)
                    for i in mono:
                        sym *= ad[i]
                    for ph, m in zip(phases, mults):
                        for c in ch:
                            total += m * mpmath.log(1 - ph * mpmath.mpc(c) * sym * base)
        return complex(total)


def ruelle_direct(lengths, angles, chi, weights, s, dps: int = 30):
    """log prod_gamma det(1 - sigma(m) chi(gamma) e^{-s l}) in closed form."""
    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        for l, th, ch in zip(lengths, angles, chi):
            base = mpmath.exp(-mpmath.mpc(s) * l)
            for wt, m in weights.items():
                ph = mpmath.exp(1j * sum(mpmath.mpf(float(w)) * mpmath.mpf(t) for w, t in zip(wt, th)))
                for c in ch:
                    total += m * mpmath.log(1 - ph * mpmath.mpc(c) * base)
        return complex(total)
