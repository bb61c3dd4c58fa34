"""Twisted Selberg, Ruelle, symmetrized and super zeta functions as log-Euler products.

For a primitive geodesic g of length l with holonomy angles theta and twist
eigenvalues chi_j, the Selberg local factor is resummed over symmetric
powers, giving

    log Z(s) = - sum_g sum_n (1/n) tr chi(g^n) tr sigma(m^n) e^{-n (s + rho) l}
                 / prod_j |1 - e^{-n l + i n theta_j}|^2,

    log R(s) = - sum_g sum_n (1/n) tr chi(g^n) tr sigma(m^n) e^{-n s l}.

The n-series is cut per geodesic at the smallest N whose rigorous geometric
tail bound is below tail_tol / (number of geodesics).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DivergenceError, DomainError, TruncationError
from .geodata import LengthSpectrum
from .repkit import MIrrep, VirtualMRep, as_virtual, exterior_powers_of_n

MAX_TERMS = 1_000_000


@dataclass(frozen=True)
class ZetaEvaluation:
    value: complex
    truncation_bound: float
    n_terms: int
    convergence_abscissa: float


# --- characters ---------------------------------------------------------------


@lru_cache(maxsize=256)
def _weight_arrays(rep: VirtualMRep) -> tuple[np.ndarray, np.ndarray]:
    weights = rep.weights()
    n = next(iter(rep.terms))[0].rank if rep.terms else 1
    if not weights:
        return np.zeros((0, n)), np.zeros(0)
    W = np.array([[float(c) for c in w] for w in weights], dtype=float)
    m = np.array(list(weights.values()), dtype=float)
    W.setflags(write=False)
    m.setflags(write=False)
    return W, m


def character(rep: MIrrep | VirtualMRep, angles) -> complex:
    """tr rep(m) for the torus element with the given rotation angles, as a sum over weights."""
    W, m = _weight_arrays(as_virtual(rep))
    return complex(np.sum(m * np.exp(1j * (W @ np.asarray(angles, dtype=float)))))


def _weyl_numerator(x, angles) -> complex:
    if len(x) == 1:
        return cmath.exp(1j * x[0] * angles[0])
    c = np.array([[2 * math.cos(xj * t) for xj in x] for t in angles])
    s = np.array([[2j * math.sin(xj * t) for xj in x] for t in angles])
    return 0.5 * (np.linalg.det(c) + np.linalg.det(s))


def weyl_character(sigma: MIrrep, angles, singular_tol: float = 1e-6) -> complex:
    """tr sigma(m) from the Weyl character formula for Spin(2n).

    The formula is a ratio of alternating sums whose denominator vanishes
    on singular tori; there, and near them, the exact weight sum is used.
    """
    angles = [float(a) for a in angles]
    n = sigma.rank
    rho = [n - 1 - j for j in range(n)]
    den = _weyl_numerator(rho, angles)
    if abs(den) < singular_tol:
        return character(sigma, angles)
    num = _weyl_numerator([float(w) + r for w, r in zip(sigma.weight, rho)], angles)
    return complex(num / den)


# --- truncation planning --------------------------------------------------------


@dataclass(frozen=True)
class _Arrays:
    lengths: np.ndarray
    angles: np.ndarray
    chi: np.ndarray
    chi_max: np.ndarray


def _arrays(spec: LengthSpectrum) -> _Arrays:
    G = len(spec.geodesics)
    r = (spec.d - 1) // 2
    lengths = np.array([g.length for g in spec.geodesics], dtype=float)
    angles = np.array([g.holonomy_angles for g in spec.geodesics], dtype=float).reshape(G, r)
    chi = np.array([g.chi_eigenvalues for g in spec.geodesics], dtype=complex).reshape(G, spec.dim_chi)
    chi_max = np.abs(chi).max(axis=1) if G else np.zeros(0)
    return _Arrays(lengths, angles, chi, chi_max)


def growth_rate(spec: LengthSpectrum) -> float:
    """max over geodesics of log(max_j |chi_j|) / l: exponential growth of |tr chi(g^n)| per unit length."""
    if not spec.geodesics:
        return -math.inf
    a = _arrays(spec)
    return float(np.max(np.log(a.chi_max) / a.lengths))


def selberg_abscissa(spec: LengthSpectrum) -> float:
    return growth_rate(spec) - spec.rho


def ruelle_abscissa(spec: LengthSpectrum) -> float:
    return growth_rate(spec)


def _tail_bounds(a: _Arrays, dim_chi: int, char_norm: float, s: complex, shift: float, with_den: bool, r: int, N):
    """Bound on sum_{n > N} |term_n| for every geodesic (vectorised over geodesics)."""
    q = a.chi_max * np.exp(-(s.real + shift) * a.lengths)
    N = np.asarray(N, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        bound = dim_chi * char_norm * q ** (N + 1) / ((N + 1) * (1 - q))
        if with_den:
            bound = bound / (1 - np.exp(-(N + 1) * a.lengths)) ** (2 * r)
    return np.where(q < 1, bound, np.inf)


def _plan(a: _Arrays, dim_chi: int, char_norm: float, s: complex, shift: float, with_den: bool, r: int, tol: float):
    G = len(a.lengths)
    if G == 0:
        return np.zeros(0, dtype=np.int64)
    q = a.chi_max * np.exp(-(s.real + shift) * a.lengths)
    if np.any(q >= 1):
        raise DivergenceError(
            f"Re(s) = {s.real} is not in the half-plane of absolute convergence",
            abscissa=float(np.max(np.log(a.chi_max) / a.lengths) - shift),
        )
    per = tol / G
    lo = np.zeros(G, dtype=np.int64)
    hi = np.ones(G, dtype=np.int64)
    # Exponential search for an upper bracket, then bisection; the bound is decreasing in N.
    while True:
        ok = _tail_bounds(a, dim_chi, char_norm, s, shift, with_den, r, hi) <= per
        if ok.all():
            break
        if hi.max() > MAX_TERMS:
            achieved = float(np.sum(_tail_bounds(a, dim_chi, char_norm, s, shift, with_den, r, np.minimum(hi, MAX_TERMS))))
            raise TruncationError(f"tail tolerance {tol} not reachable within {MAX_TERMS} terms", achieved_bound=achieved)
        hi = np.where(ok, hi, 2 * hi)
    while np.any(hi - lo > 1):
        mid = (lo + hi) // 2
        ok = _tail_bounds(a, dim_chi, char_norm, s, shift, with_den, r, mid) <= per
        active = hi - lo > 1
        hi = np.where(active & ok, mid, hi)
        lo = np.where(active & ~ok, mid, lo)
    # lo may itself satisfy the bound when it is 0 (no terms needed).
    zero_ok = _tail_bounds(a, dim_chi, char_norm, s, shift, with_den, r, np.zeros(G)) <= per
    return np.where(zero_ok, 0, hi).astype(np.int64)


def _check_rep(spec: LengthSpectrum, rep) -> VirtualMRep:
    rep = as_virtual(rep)
    for irrep, _ in rep:
        if irrep.d != spec.d:
            raise DomainError(f"representation {irrep} belongs to d={irrep.d}, spectrum has d={spec.d}")
    return rep


def _euler(spec, rep, s, shift, with_den, tail_tol, n_max=None, backend=None) -> ZetaEvaluation:
    s = complex(s)
    rep = _check_rep(spec, rep)
    abscissa = growth_rate(spec) - shift
    if not spec.geodesics or not rep.terms:
        return ZetaEvaluation(0j, 0.0, 0, abscissa)
    if not tail_tol > 0:
        raise DomainError(f"tail_tol must be positive, got {tail_tol}")
    if not s.real > abscissa:
        raise DivergenceError(f"Re(s) = {s.real} <= convergence abscissa {abscissa}", abscissa=abscissa)
    a = _arrays(spec)
    W, m = _weight_arrays(rep)
    char_norm = float(np.abs(m).sum())
    r = (spec.d - 1) // 2
    if n_max is None:
        n_max = _plan(a, spec.dim_chi, char_norm, s, shift, with_den, r, tail_tol)
    bound = float(np.sum(_tail_bounds(a, spec.dim_chi, char_norm, s, shift, with_den, r, n_max)))
    total = kernels.euler_log_sum(a.lengths, a.angles, a.chi, n_max, W, m, s, shift, with_den, backend=backend)
    return ZetaEvaluation(-total, bound, int(np.sum(n_max)), abscissa)


def log_selberg(spec: LengthSpectrum, sigma, s, tail_tol: float = 1e-12, *, n_max=None, backend=None) -> ZetaEvaluation:
    """log Z(s; sigma, chi); sigma may be a virtual representation (additive in log)."""
    return _euler(spec, sigma, s, spec.rho, True, tail_tol, n_max, backend)


def log_ruelle(spec: LengthSpectrum, sigma, s, tail_tol: float = 1e-12, *, n_max=None, backend=None) -> ZetaEvaluation:
    """log R(s; sigma, chi)."""
    return _euler(spec, sigma, s, 0.0, False, tail_tol, n_max, backend)


def _combine(a: ZetaEvaluation, b: ZetaEvaluation, sign: int) -> ZetaEvaluation:
    return ZetaEvaluation(
        a.value + sign * b.value,
        a.truncation_bound + b.truncation_bound,
        a.n_terms + b.n_terms,
        max(a.convergence_abscissa, b.convergence_abscissa),
    )


def _flip(sigma):
    return as_virtual(sigma).flip()


def log_symmetrized(spec: LengthSpectrum, sigma, s, tail_tol: float = 1e-12) -> ZetaEvaluation:
    """log S(s) = log Z(s; sigma) + log Z(s; w sigma)."""
    return _combine(log_selberg(spec, sigma, s, tail_tol / 2), log_selberg(spec, _flip(sigma), s, tail_tol / 2), 1)


def log_super_zeta(spec: LengthSpectrum, sigma, s, tail_tol: float = 1e-12) -> ZetaEvaluation:
    """log Z^s(s) = log Z(s; sigma) - log Z(s; w sigma)."""
    return _combine(log_selberg(spec, sigma, s, tail_tol / 2), log_selberg(spec, _flip(sigma), s, tail_tol / 2), -1)


def log_super_ruelle(spec: LengthSpectrum, sigma, s, tail_tol: float = 1e-12) -> ZetaEvaluation:
    """log R^s(s) = log R(s; sigma) - log R(s; w sigma)."""
    return _combine(log_ruelle(spec, sigma, s, tail_tol / 2), log_ruelle(spec, _flip(sigma), s, tail_tol / 2), -1)


# --- Ruelle = alternating product of Selberg ----------------------------------------


@dataclass(frozen=True)
class FactorizationCheck:
    residual: float
    truncation_bound: float
    log_ruelle: complex
    log_selberg_product: complex


def ruelle_factorization_check(spec: LengthSpectrum, sigma: MIrrep, s, tail_tol: float = 1e-12, backend=None) -> FactorizationCheck:
    """Compare log R(s) with sum_p (-1)^p log Z(s + rho - p; Lambda^p (x) sigma).

    All terms share one truncation: per geodesic, the largest N any single
    factor needs.  The identity then holds power by power, so the residual
    is rounding only.
    """
    s = complex(s)
    _check_rep(spec, sigma)
    rho = spec.rho
    pieces = [((-1) ** p, rep.tensor(sigma), s + rho - shift) for p, (rep, shift) in enumerate(exterior_powers_of_n(spec.d))]
    if not spec.geodesics:
        return FactorizationCheck(0.0, 0.0, 0j, 0j)
    a = _arrays(spec)
    r = (spec.d - 1) // 2
    sig = as_virtual(sigma)
    needs = [_plan(a, spec.dim_chi, float(np.abs(_weight_arrays(sig)[1]).sum()), s, 0.0, False, r, tail_tol)]
    for _, rep, arg in pieces:
        norm = float(np.abs(_weight_arrays(rep)[1]).sum())
        needs.append(_plan(a, spec.dim_chi, norm, arg, rho, True, r, tail_tol))
    n_max = np.max(np.vstack(needs), axis=0)
    ruelle = log_ruelle(spec, sigma, s, tail_tol, n_max=n_max, backend=backend)
    product = 0j
    bound = ruelle.truncation_bound
    for sign, rep, arg in pieces:
        ev = log_selberg(spec, rep, arg, tail_tol, n_max=n_max, backend=backend)
        product += sign * ev.value
        bound += ev.truncation_bound
    return FactorizationCheck(abs(ruelle.value - product), bound, ruelle.value, product)


def ruelle_factorization_residual(spec: LengthSpectrum, sigma: MIrrep, s, tail_tol: float = 1e-12) -> float:
    return ruelle_factorization_check(spec, sigma, s, tail_tol).residual


# --- symmetric-power resummation, small-matrix form ----------------------------------------


def _monomials(dim: int, k: int) -> list[tuple[int, ...]]:
    return sorted((c for c in itertools.product(range(k + 1), repeat=dim) if sum(c) == k), reverse=True)


def _symmetric_powers(C: np.ndarray, K: int):
    """Yield Sym^k(C) for k = 0..K on the monomial basis of degree-k polynomials.

    C sends x_i to l_i = sum_j C[j, i] x_j; the image of a degree-k monomial
    is l_i times the image of the monomial with one x_i removed.
    """
    C = np.asarray(C, dtype=complex)
    dim = C.shape[0]
    prev_basis = [(0,) * dim]
    prev = np.ones((1, 1), dtype=complex)
    yield prev
    for k in range(1, K + 1):
        basis = _monomials(dim, k)
        index = {mono: i for i, mono in enumerate(basis)}
        prev_index = {mono: i for i, mono in enumerate(prev_basis)}
        # up[j][i]: index of (monomial i of degree k-1) * x_j.
        up = []
        for j in range(dim):
            row = np.empty(len(prev_basis), dtype=np.int64)
            for mono, i in prev_index.items():
                bumped = list(mono)
                bumped[j] += 1
                row[i] = index[tuple(bumped)]
            up.append(row)
        out = np.zeros((len(basis), len(basis)), dtype=complex)
        for mono, col in index.items():
            i = next(t for t, e in enumerate(mono) if e)
            lower = list(mono)
            lower[i] -= 1
            image = prev[:, prev_index[tuple(lower)]]
            for j in range(dim):
                if C[j, i] != 0:
                    out[up[j], col] += C[j, i] * image
        prev_basis, prev = basis, out
        yield out


def symmetric_power_matrix(C: np.ndarray, k: int) -> np.ndarray:
    """Matrix of Sym^k(C) on the monomial basis of degree-k polynomials."""
    for S in _symmetric_powers(C, k):
        pass
    return S


def log_symmetric_product(B: np.ndarray, C: np.ndarray, q: complex, K: int) -> complex:
    """sum_{k=0}^K log det(I - q B (x) Sym^k C), each factor by explicit Kronecker product."""
    B = np.asarray(B, dtype=complex)
    total = 0j
    for S in _symmetric_powers(C, K):
        M = np.eye(B.shape[0] * S.shape[0]) - q * np.kron(B, S)
        sign, logabs = np.linalg.slogdet(M)
        total += logabs + 1j * cmath.phase(sign)
    return total


def symmetric_product_tail_bound(B: np.ndarray, C: np.ndarray, q: complex, K: int) -> float:
    """Bound on sum_{k>K} |log det(I - q B (x) Sym^k C)| from spectral radii."""
    rb = float(np.max(np.abs(np.linalg.eigvals(B))))
    rc = float(np.max(np.abs(np.linalg.eigvals(C))))
    dim_b, dim_c = np.asarray(B).shape[0], np.asarray(C).shape[0]
    total = 0.0
    k = K + 1
    while True:
        x = abs(q) * rb * rc**k
        if x >= 1:
            return math.inf
        term = dim_b * math.comb(k + dim_c - 1, dim_c - 1) * -math.log1p(-x)
        total += term
        if term < 1e-30 * max(total, 1e-300) or term == 0.0:
            return total
        k += 1


def log_symmetric_product_resummed(B: np.ndarray, C: np.ndarray, q: complex, tol: float = 1e-15) -> complex:
    """-sum_n q^n tr(B^n) / (n det(I - C^n)): the closed form used by log_selberg."""
    B = np.asarray(B, dtype=complex)
    C = np.asarray(C, dtype=complex)
    rb = float(np.max(np.abs(np.linalg.eigvals(B))))
    rc = float(np.max(np.abs(np.linalg.eigvals(C))))
    x = abs(q) * rb
    if x >= 1 or rc >= 1:
        raise DivergenceError("resummed series needs |q| rho(B) < 1 and rho(C) < 1")
    Bn = np.eye(B.shape[0], dtype=complex)
    Cn = np.eye(C.shape[0], dtype=complex)
    total = 0j
    n = 0
    while True:
        n += 1
        Bn = Bn @ B
        Cn = Cn @ C
        total -= q**n * np.trace(Bn) / (n * np.linalg.det(np.eye(C.shape[0]) - Cn))
        tail = B.shape[0] * x ** (n + 1) / ((n + 1) * (1 - x) * (1 - rc ** (n + 1)) ** C.shape[0])
        if tail < tol or n >= MAX_TERMS:
            return complex(total)
