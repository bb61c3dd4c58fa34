"""Exact root-system and representation-theory kernel.

Everything here works over ``fractions.Fraction``; no floating point is
involved.  Types B and D use coordinates in the orthonormal basis
``e_1 .. e_n``.  Type A uses the fundamental-weight (Dynkin label) basis
with the inverse Cartan matrix as Gram matrix, so a rank-n weight has n
coordinates.

The compact group M = Spin(d-1) is type D of rank (d-1)/2.  For d = 3 it is
a circle, modelled as "D1": one coordinate, no roots, trivial Weyl group.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import DomainError, InvariantViolation, ValidationError

SERIES = ("A", "B", "D")


class WeightVector(tuple):
    """Immutable vector of exact rationals, all integral or all half-odd."""

    def __new__(cls, coords: Iterable) -> "WeightVector":
        values = tuple(Fraction(c) for c in coords)
        doubled = [2 * c for c in values]
        if any(t.denominator != 1 for t in doubled):
            raise ValidationError(f"weight coordinates must lie in (1/2)Z, got {_fmt(values)}")
        if len({t.numerator % 2 for t in doubled}) > 1:
            raise ValidationError(f"weight mixes integral and half-odd coordinates: {_fmt(values)}")
        return super().__new__(cls, values)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(self)

    def __add__(self, other):
        return WeightVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return WeightVector(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return WeightVector(-a for a in self)

    def __mul__(self, k):
        return WeightVector(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"WeightVector({_fmt(self)})"

    def __str__(self) -> str:
        return _fmt(self)


def _fmt(values) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    positive_roots: tuple[WeightVector, ...]
    simple_roots: tuple[WeightVector, ...]
    gram: tuple[tuple[Fraction, ...], ...]

    def inner(self, x, y) -> Fraction:
        g = self.gram
        return sum(
            (x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if g[i][j]),
            Fraction(0),
        )

    def pairing(self, x, alpha) -> Fraction:
        """Coroot pairing 2<x, alpha>/<alpha, alpha>."""
        return 2 * self.inner(x, alpha) / self.inner(alpha, alpha)

    @property
    def rho(self) -> WeightVector:
        return _rho(self)

    def is_dominant(self, weight) -> bool:
        return all(self.pairing(weight, a) >= 0 for a in self.simple_roots)

    def is_integral(self, weight) -> bool:
        if any((2 * c).denominator != 1 for c in weight):
            return False
        return all(self.pairing(weight, a).denominator == 1 for a in self.simple_roots)

    def check_highest_weight(self, weight) -> WeightVector:
        weight = WeightVector(weight)
        if len(weight) != self.rank:
            raise DomainError(f"weight {weight} has {len(weight)} coordinates, {self.series}{self.rank} needs {self.rank}")
        if not self.is_integral(weight):
            raise DomainError(f"weight {weight} is not integral for {self.series}{self.rank}")
        if not self.is_dominant(weight):
            raise DomainError(f"weight {weight} is not dominant for {self.series}{self.rank}")
        return weight

    def height(self, root) -> Fraction:
        """Sum of the coefficients of ``root`` in the simple-root basis."""
        return sum(_simple_coefficients(self, tuple(root)), Fraction(0))


@lru_cache(maxsize=None)
def root_system(series: str, rank: int) -> RootSystem:
    series = str(series).upper()
    if series not in SERIES:
        raise DomainError(f"unknown root-system series {series!r}")
    if rank < 1:
        raise DomainError(f"rank must be positive, got {rank}")
    one, zero = Fraction(1), Fraction(0)

    def e(i: int, sign: int = 1) -> list[Fraction]:
        v = [zero] * rank
        v[i] = Fraction(sign)
        return v

    if series == "A":
        cartan = [[Fraction(2 if i == j else -1 if abs(i - j) == 1 else 0) for j in range(rank)] for i in range(rank)]
        simple = [WeightVector(row) for row in cartan]
        positive = [
            WeightVector(sum(cartan[k][c] for k in range(i, j + 1)) for c in range(rank))
            for i in range(rank)
            for j in range(i, rank)
        ]
        gram = _inverse(cartan)
    else:
        gram = tuple(tuple(one if i == j else zero for j in range(rank)) for i in range(rank))
        positive = []
        for i in range(rank):
            for j in range(i + 1, rank):
                minus = e(i)
                minus[j] = -one
                plus = e(i)
                plus[j] = one
                positive += [WeightVector(minus), WeightVector(plus)]
        simple = []
        for i in range(rank - 1):
            v = e(i)
            v[i + 1] = -one
            simple.append(WeightVector(v))
        if series == "B":
            positive += [WeightVector(e(i)) for i in range(rank)]
            simple.append(WeightVector(e(rank - 1)))
        elif rank >= 2:
            v = [zero] * rank
            v[rank - 2] = v[rank - 1] = one
            simple.append(WeightVector(v))
    return RootSystem(series, rank, tuple(positive), tuple(simple), tuple(tuple(r) for r in gram))


def _inverse(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def _rho(rs: RootSystem) -> WeightVector:
    total = [Fraction(0)] * rs.rank
    for a in rs.positive_roots:
        total = [t + c for t, c in zip(total, a)]
    return WeightVector(t / 2 for t in total)


@lru_cache(maxsize=None)
def _simple_coefficients(rs: RootSystem, vector: tuple) -> tuple[Fraction, ...]:
    # Solve sum_i c_i * simple_i = vector via the Gram pairing with the simple roots.
    n = len(rs.simple_roots)
    lhs = [[rs.inner(rs.simple_roots[i], rs.simple_roots[j]) for j in range(n)] for i in range(n)]
    rhs = [rs.inner(rs.simple_roots[i], vector) for i in range(n)]
    inv = _inverse(lhs)
    return tuple(sum((inv[i][j] * rhs[j] for j in range(n)), Fraction(0)) for i in range(n))


def weyl_group_order(series: str, rank: int) -> int:
    """Order of the Weyl group of type A_n, B_n or D_n."""
    series = str(series).upper()
    if series not in SERIES:
        raise DomainError(f"unknown root-system series {series!r}")
    if not isinstance(rank, int) or rank < 1:
        raise DomainError(f"rank must be a positive integer, got {rank!r}")
    if series == "A":
        return math.factorial(rank + 1)
    if series == "B":
        return 2**rank * math.factorial(rank)
    return 2 ** (rank - 1) * math.factorial(rank)


def weyl_dimension(rs: RootSystem, highest_weight) -> int:
    """Dimension of the irreducible representation with the given highest weight."""
    weight = rs.check_highest_weight(highest_weight)
    value = weyl_product(rs, weight)
    if value.denominator != 1 or value <= 0:
        raise InvariantViolation(f"Weyl dimension of {weight} evaluated to {value}")
    return int(value)


def weyl_product(rs: RootSystem, weight) -> Fraction:
    """The Weyl dimension product without any dominance check.

    For non-dominant weights this is the signed dimension of the virtual
    representation obtained by the dot action, possibly zero.
    """
    rho = rs.rho
    shifted = [w + r for w, r in zip(weight, rho)]
    value = Fraction(1)
    for alpha in rs.positive_roots:
        value *= rs.inner(shifted, alpha) / rs.inner(rho, alpha)
    return value


def freudenthal_multiplicities(rs: RootSystem, highest_weight) -> dict[WeightVector, int]:
    """All weights of the irreducible representation with their multiplicities."""
    weight = rs.check_highest_weight(highest_weight)
    return {WeightVector(mu): m for mu, m in _freudenthal(rs, tuple(weight))}


@lru_cache(maxsize=None)
def _freudenthal(rs: RootSystem, top: tuple) -> tuple[tuple[tuple, int], ...]:
    rho = rs.rho
    inner = rs.inner
    roots = [(tuple(a), int(rs.height(a)), inner(a, a)) for a in rs.positive_roots]
    simple = [tuple(a) for a in rs.simple_roots]
    top_rho = tuple(t + r for t, r in zip(top, rho))
    top_norm = inner(top_rho, top_rho)

    mult: dict[tuple, int] = {top: 1}
    layer = [top]
    level = 0
    while layer:
        level += 1
        candidates = sorted({tuple(m - a for m, a in zip(mu, alpha)) for mu in layer for alpha in simple})
        new_layer = []
        for nu in candidates:
            nu_rho = tuple(x + r for x, r in zip(nu, rho))
            denom = top_norm - inner(nu_rho, nu_rho)
            if denom == 0:
                continue
            total = Fraction(0)
            for alpha, height, _ in roots:
                k = 1
                while level - k * height >= 0:
                    shifted = tuple(x + k * a for x, a in zip(nu, alpha))
                    m = mult.get(shifted)
                    if m:
                        total += m * inner(shifted, alpha)
                    k += 1
            value = 2 * total / denom
            if value.denominator != 1 or value < 0:
                raise InvariantViolation(f"Freudenthal produced non-integral multiplicity {value} at {nu}")
            if value:
                mult[nu] = int(value)
                new_layer.append(nu)
        layer = new_layer
    return tuple(sorted(mult.items(), reverse=True))


def reflect_to_dominant(rs: RootSystem, vector) -> tuple[int, WeightVector] | None:
    """Move ``vector`` into the dominant chamber by simple reflections.

    Returns (sign of the Weyl element, dominant image), or None when the
    image lies on a wall.
    """
    x = list(vector)
    sign = 1
    moved = True
    while moved:
        moved = False
        for alpha in rs.simple_roots:
            c = rs.pairing(x, alpha)
            if c < 0:
                x = [xi - c * ai for xi, ai in zip(x, alpha)]
                sign = -sign
                moved = True
    if any(rs.pairing(x, alpha) == 0 for alpha in rs.simple_roots):
        return None
    return sign, WeightVector(x)


def tensor_decompose(rs: RootSystem, mu, nu) -> dict[WeightVector, int]:
    """Klimyk decomposition of V(mu) (x) V(nu) as {highest weight: multiplicity}."""
    mu = rs.check_highest_weight(mu)
    nu = rs.check_highest_weight(nu)
    # Iterate over the weights of the smaller factor; the result is symmetric either way.
    if weyl_dimension(rs, nu) > weyl_dimension(rs, mu):
        mu, nu = nu, mu
    rho = rs.rho
    result: Counter = Counter()
    for weight, m in _freudenthal(rs, tuple(nu)):
        hit = reflect_to_dominant(rs, [a + b + r for a, b, r in zip(mu, weight, rho)])
        if hit is None:
            continue
        sign, dominant = hit
        result[WeightVector(x - r for x, r in zip(dominant, rho))] += sign * m
    out = {w: m for w, m in sorted(result.items(), reverse=True) if m}
    if any(m < 0 for m in out.values()):
        raise InvariantViolation(f"negative multiplicity in Klimyk decomposition of {mu} x {nu}")
    return out


# --- representations of M = Spin(d-1) ---------------------------------------


def _check_d(d) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d < 3 or d % 2 == 0:
        raise DomainError(f"d must be an odd integer >= 3, got {d!r}")
    return d


def m_root_system(d: int) -> RootSystem:
    """Root system of M = Spin(d-1), type D of rank (d-1)/2."""
    return root_system("D", (_check_d(d) - 1) // 2)


def compact_root_system(d: int) -> RootSystem:
    """Root system of the compact form Spin(d+1), type D of rank (d+1)/2."""
    return root_system("D", (_check_d(d) + 1) // 2)


@dataclass(frozen=True, order=True)
class MIrrep:
    """Irreducible representation of Spin(d-1) by highest weight.

    For d = 3 the weight has one coordinate, the character k of the circle.
    """

    d: int
    weight: WeightVector

    def __post_init__(self):
        _check_d(self.d)
        object.__setattr__(self, "weight", WeightVector(self.weight))
        n = (self.d - 1) // 2
        if len(self.weight) != n:
            raise DomainError(f"d={self.d} needs a weight with {n} coordinates, got {self.weight}")
        w = self.weight
        if n >= 2:
            ok = all(w[i] >= w[i + 1] for i in range(n - 2)) and w[n - 2] >= abs(w[n - 1])
            if not ok:
                raise DomainError(f"weight {w} is not dominant for Spin({self.d - 1})")

    @classmethod
    def of(cls, d: int, coords: Iterable) -> "MIrrep":
        return cls(d, WeightVector(coords))

    @classmethod
    def trivial(cls, d: int) -> "MIrrep":
        return cls(d, WeightVector([0] * ((_check_d(d) - 1) // 2)))

    @property
    def rank(self) -> int:
        return (self.d - 1) // 2

    @property
    def is_weyl_invariant(self) -> bool:
        return self.weight[-1] == 0

    @property
    def dim(self) -> int:
        return weyl_dimension(m_root_system(self.d), self.weight)

    def weights(self) -> dict[WeightVector, int]:
        return freudenthal_multiplicities(m_root_system(self.d), self.weight)

    def flip(self) -> "MIrrep":
        w = list(self.weight)
        w[-1] = -w[-1]
        return MIrrep(self.d, WeightVector(w))

    def __str__(self) -> str:
        return str(self.weight)


@dataclass(frozen=True)
class VirtualMRep:
    """Formal integer combination of irreducible M-representations."""

    terms: tuple[tuple[MIrrep, int], ...]

    def __post_init__(self):
        seen = set()
        for irrep, m in self.terms:
            if irrep in seen:
                raise ValidationError(f"duplicate irreducible {irrep} in virtual representation")
            if m == 0:
                raise ValidationError("zero multiplicity in virtual representation")
            seen.add(irrep)
        if len({irrep.d for irrep in seen}) > 1:
            raise ValidationError("virtual representation mixes different d")

    @classmethod
    def of(cls, pairs: Iterable[tuple[MIrrep, int]]) -> "VirtualMRep":
        acc: Counter = Counter()
        for irrep, m in pairs:
            acc[irrep] += m
        return cls(tuple(sorted(((i, m) for i, m in acc.items() if m), key=lambda t: t[0], reverse=True)))

    @classmethod
    def irreducible(cls, irrep: MIrrep) -> "VirtualMRep":
        return cls(((irrep, 1),))

    def __iter__(self) -> Iterator[tuple[MIrrep, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "VirtualMRep") -> "VirtualMRep":
        return VirtualMRep.of(self.terms + other.terms)

    def __neg__(self) -> "VirtualMRep":
        return VirtualMRep.of((i, -m) for i, m in self.terms)

    def scaled(self, k: int) -> "VirtualMRep":
        return VirtualMRep.of((i, k * m) for i, m in self.terms)

    @property
    def dim(self) -> int:
        return sum(m * i.dim for i, m in self.terms)

    def flip(self) -> "VirtualMRep":
        return VirtualMRep.of((i.flip(), m) for i, m in self.terms)

    @property
    def is_weyl_invariant(self) -> bool:
        return self.flip() == self

    def tensor(self, sigma: MIrrep) -> "VirtualMRep":
        rs = m_root_system(sigma.d)
        pairs = []
        for irrep, m in self.terms:
            for weight, k in tensor_decompose(rs, irrep.weight, sigma.weight).items():
                pairs.append((MIrrep(sigma.d, weight), m * k))
        return VirtualMRep.of(pairs)

    def weights(self) -> dict[WeightVector, int]:
        """Signed weight multiplicities of the formal character."""
        acc: Counter = Counter()
        for irrep, m in self.terms:
            for w, k in irrep.weights().items():
                acc[w] += m * k
        return {w: k for w, k in sorted(acc.items(), reverse=True) if k}

    def __str__(self) -> str:
        return " + ".join(f"{m}*{i}" for i, m in self.terms) or "0"


def as_virtual(rep: MIrrep | VirtualMRep) -> VirtualMRep:
    return rep if isinstance(rep, VirtualMRep) else VirtualMRep.irreducible(rep)


def exterior_powers_of_n(d: int) -> list[tuple[VirtualMRep, int]]:
    """Decomposition of the exterior powers of the standard representation of Spin(d-1).

    Entry p is (Lambda^p as M-representation, exponent of the A-character).
    The exponent is p for every p; for p past the middle degree the
    representation equals that of the dual degree d-1-p.
    """
    n = (_check_d(d) - 1) // 2
    out = []
    for p in range(2 * n + 1):
        q = min(p, 2 * n - p)
        if q < n:
            rep = VirtualMRep.irreducible(MIrrep.of(d, [1] * q + [0] * (n - q)))
        else:
            top = MIrrep.of(d, [1] * n)
            rep = VirtualMRep.of([(top, 1), (top.flip(), 1)])
        out.append((rep, p))
    return out


def weyl_action(sigma: MIrrep) -> tuple[MIrrep, bool]:
    """Action of the non-trivial restricted Weyl element: flip the sign of the last coordinate."""
    flipped = sigma.flip()
    return flipped, flipped == sigma
