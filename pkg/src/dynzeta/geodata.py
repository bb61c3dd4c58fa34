"""Length-spectrum and operator-spectrum data: types, file formats, synthesis."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ParseError, ValidationError

TWO_PI = 2.0 * math.pi


def reduce_angle(x: float) -> float:
    """Representative of x modulo 2*pi in (-pi, pi]."""
    return math.pi - math.fmod(math.fmod(math.pi - x, TWO_PI) + TWO_PI, TWO_PI)


@dataclass(frozen=True)
class PrimitiveGeodesic:
    id: str
    length: float
    holonomy_angles: tuple[float, ...]
    chi_eigenvalues: tuple[complex, ...]
    n_multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "holonomy_angles", tuple(float(a) for a in self.holonomy_angles))
        object.__setattr__(self, "chi_eigenvalues", tuple(complex(z) for z in self.chi_eigenvalues))
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValidationError(f"geodesic {self.id!r}: length must be positive, got {self.length}", id=self.id)
        if any(z == 0 or not (math.isfinite(z.real) and math.isfinite(z.imag)) for z in self.chi_eigenvalues):
            raise ValidationError(f"geodesic {self.id!r}: chi eigenvalues must be finite and nonzero", id=self.id)
        if any(not (-math.pi < a <= math.pi) for a in self.holonomy_angles):
            raise ValidationError(f"geodesic {self.id!r}: holonomy angles must lie in (-pi, pi]", id=self.id)
        if not isinstance(self.n_multiplicity, int) or self.n_multiplicity < 1:
            raise ValidationError(f"geodesic {self.id!r}: n_multiplicity must be a positive integer", id=self.id)


def geodesic_power(g: PrimitiveGeodesic, n: int) -> PrimitiveGeodesic:
    """Record of the n-th power of a closed geodesic.

    Angles are reduced to (-pi, pi].  For spin characters this reduction is
    not harmless, which is why the zeta evaluators work from the primitive
    angles times n instead of from these records.
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"power must be a positive integer, got {n!r}")
    if n == 1:
        return g
    return replace(
        g,
        length=n * g.length,
        holonomy_angles=tuple(reduce_angle(n * a) for a in g.holonomy_angles),
        chi_eigenvalues=tuple(z**n for z in g.chi_eigenvalues),
        n_multiplicity=g.n_multiplicity * n,
    )


@dataclass(frozen=True)
class LengthSpectrum:
    d: int
    vol_x: float
    dim_chi: int
    geodesics: tuple[PrimitiveGeodesic, ...] = ()

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 3 or self.d % 2 == 0:
            raise ValidationError(f"d must be an odd integer >= 3, got {self.d!r}")
        if not (self.vol_x > 0 and math.isfinite(self.vol_x)):
            raise ValidationError(f"vol_x must be positive, got {self.vol_x}")
        if not isinstance(self.dim_chi, int) or self.dim_chi < 1:
            raise ValidationError(f"dim_chi must be a positive integer, got {self.dim_chi!r}")
        object.__setattr__(self, "vol_x", float(self.vol_x))
        geos = tuple(sorted(self.geodesics, key=lambda g: (g.length, g.id)))
        ids = set()
        n_angles = (self.d - 1) // 2
        for g in geos:
            if g.id in ids:
                raise ValidationError(f"duplicate geodesic id {g.id!r}", id=g.id)
            ids.add(g.id)
            if len(g.chi_eigenvalues) != self.dim_chi:
                raise ValidationError(
                    f"geodesic {g.id!r}: {len(g.chi_eigenvalues)} chi eigenvalues but dim_chi={self.dim_chi}",
                    id=g.id,
                )
            if len(g.holonomy_angles) != n_angles:
                raise ValidationError(
                    f"geodesic {g.id!r}: {len(g.holonomy_angles)} holonomy angles, d={self.d} needs {n_angles}",
                    id=g.id,
                )
        object.__setattr__(self, "geodesics", geos)

    @property
    def rho(self) -> float:
        return (self.d - 1) / 2

    def __len__(self) -> int:
        return len(self.geodesics)


# --- length-spectrum files (JSON Lines) ---------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def dumps_length_spectrum(spec: LengthSpectrum) -> str:
    lines = [_dumps({"d": spec.d, "vol_x": spec.vol_x, "dim_chi": spec.dim_chi})]
    for g in spec.geodesics:
        lines.append(
            _dumps(
                {
                    "id": g.id,
                    "length": g.length,
                    "holonomy_angles": list(g.holonomy_angles),
                    "chi_eigenvalues": [_complex_pair(z) for z in g.chi_eigenvalues],
                    "n_multiplicity": g.n_multiplicity,
                }
            )
        )
    return "\n".join(lines) + "\n"


def save_length_spectrum(spec: LengthSpectrum, path: str | Path) -> None:
    Path(path).write_text(dumps_length_spectrum(spec), encoding="utf-8")


def _reject_constant(name: str):
    raise ValueError(f"non-finite literal {name}")


def _parse_json(text: str, where: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _as_complex(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"{where}: complex numbers must be [re, im] pairs, got {value!r}")
    return complex(value[0], value[1])


def _field(record: dict, key: str, kinds, where: str):
    if key not in record:
        raise ParseError(f"{where}: missing field {key!r}")
    value = record[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise ParseError(f"{where}: field {key!r} has wrong type")
    return value


def loads_length_spectrum(text: str, source: str = "<string>") -> LengthSpectrum:
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ParseError(f"{source}: empty file, expected a header line")
    lineno, first = lines[0]
    header = _parse_json(first, f"{source}:{lineno}")
    if not isinstance(header, dict):
        raise ParseError(f"{source}:{lineno}: header must be a JSON object")
    where = f"{source}:{lineno}"
    d = _field(header, "d", int, where)
    vol_x = _field(header, "vol_x", (int, float), where)
    dim_chi = _field(header, "dim_chi", int, where)
    geos = []
    for lineno, ln in lines[1:]:
        where = f"{source}:{lineno}"
        rec = _parse_json(ln, where)
        if not isinstance(rec, dict):
            raise ParseError(f"{where}: record must be a JSON object")
        angles = _field(rec, "holonomy_angles", list, where)
        if not all(isinstance(a, (int, float)) and not isinstance(a, bool) for a in angles):
            raise ParseError(f"{where}: holonomy_angles must be numbers")
        chi = _field(rec, "chi_eigenvalues", list, where)
        geos.append(
            PrimitiveGeodesic(
                id=_field(rec, "id", str, where),
                length=_field(rec, "length", (int, float), where),
                holonomy_angles=tuple(angles),
                chi_eigenvalues=tuple(_as_complex(z, where) for z in chi),
                n_multiplicity=rec.get("n_multiplicity", 1),
            )
        )
    return LengthSpectrum(d=d, vol_x=vol_x, dim_chi=dim_chi, geodesics=tuple(geos))


def load_length_spectrum(path: str | Path) -> LengthSpectrum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return loads_length_spectrum(text, str(path))


def synthesize_length_spectrum(
    seed: int, count: int, d: int, dim_chi: int, unitary: bool = True, vol_x: float = 1.0
) -> LengthSpectrum:
    """Deterministic stand-in for a manifold's primitive length spectrum.

    Lengths follow the logarithmic growth of prime geodesic counting,
    roughly l_k ~ 1 + log(k)/(d-1), with jitter.
    """
    rng = np.random.default_rng(seed)
    n_angles = (d - 1) // 2
    base = 1.0 + np.log1p(np.arange(count)) / (d - 1)
    lengths = np.sort(base + 0.05 * rng.random(count))
    geos = []
    for k in range(count):
        angles = -math.pi + TWO_PI * rng.random(n_angles)
        phases = TWO_PI * rng.random(dim_chi)
        if unitary:
            radii = np.ones(dim_chi)
        else:
            radii = np.exp(rng.uniform(math.log(0.5), math.log(2.0), dim_chi))
        chi = radii * np.exp(1j * phases)
        geos.append(
            PrimitiveGeodesic(
                id=f"g{k + 1}",
                length=float(lengths[k]),
                holonomy_angles=tuple(reduce_angle(float(a)) for a in angles),
                chi_eigenvalues=tuple(complex(z) for z in chi),
            )
        )
    return LengthSpectrum(d=d, vol_x=vol_x, dim_chi=dim_chi, geodesics=tuple(geos))


# --- operator spectra ---------------------------------------------------------

FIRST_ORDER_LABELS = ("D_sharp", "B_even", "B_plus", "B_minus", "dirac")


@dataclass(frozen=True)
class OperatorSpectrum:
    """Finite spectrum as (eigenvalue, algebraic multiplicity) pairs."""

    entries: tuple[tuple[complex, int], ...]
    label: str = "A_sharp"

    def __post_init__(self):
        merged: dict[complex, int] = {}
        for lam, m in self.entries:
            lam = complex(lam)
            if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
                raise ValidationError(f"spectrum {self.label!r}: non-finite eigenvalue {lam}")
            if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
                raise ValidationError(f"spectrum {self.label!r}: multiplicity must be a positive integer, got {m!r}")
            merged[lam] = merged.get(lam, 0) + int(m)
        ordered = tuple(sorted(merged.items(), key=lambda e: (e[0].real, e[0].imag)))
        object.__setattr__(self, "entries", ordered)

    @classmethod
    def from_values(cls, values: Iterable[complex], label: str = "A_sharp") -> "OperatorSpectrum":
        return cls(tuple((complex(v), 1) for v in values), label)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.entries], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=float)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def map(self, f, label: str | None = None) -> "OperatorSpectrum":
        return OperatorSpectrum(tuple((f(lam), m) for lam, m in self.entries), label or self.label)

    def union(self, other: "OperatorSpectrum", label: str | None = None) -> "OperatorSpectrum":
        return OperatorSpectrum(self.entries + other.entries, label or self.label)

    @property
    def is_first_order(self) -> bool:
        return self.label in FIRST_ORDER_LABELS


def cone_violations(spec: OperatorSpectrum, shift: float = 0.0, aperture: float = 1.0) -> list[complex]:
    """Eigenvalues outside the cone allowed for the spectrum's operator type.

    First-order labels need Re > 0 after squaring into a Laplace-type cone,
    so they are tested on lambda^2; Laplace-type labels need
    Re > -shift and |Im| <= aperture * (Re + shift).
    """
    bad = []
    for lam, _ in spec.entries:
        z = lam * lam if spec.is_first_order else lam
        if not (z.real > -shift and abs(z.imag) <= aperture * (z.real + shift)):
            bad.append(lam)
    return bad


def dumps_operator_spectrum(spec: OperatorSpectrum) -> str:
    return _dumps({"label": spec.label, "entries": [[_complex_pair(lam), m] for lam, m in spec.entries]}) + "\n"


def save_operator_spectrum(spec: OperatorSpectrum, path: str | Path) -> None:
    Path(path).write_text(dumps_operator_spectrum(spec), encoding="utf-8")


def loads_operator_spectrum(text: str, source: str = "<string>") -> OperatorSpectrum:
    obj = _parse_json(text, source)
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: operator spectrum must be a JSON object")
    label = _field(obj, "label", str, source)
    raw = _field(obj, "entries", list, source)
    entries = []
    for k, item in enumerate(raw):
        where = f"{source}: entry {k}"
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"{where}: expected [[re, im], mult]")
        mult = item[1]
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ParseError(f"{where}: multiplicity must be an integer")
        entries.append((_as_complex(item[0], where), mult))
    return OperatorSpectrum(tuple(entries), label)


def load_operator_spectrum(path: str | Path) -> OperatorSpectrum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return loads_operator_spectrum(text, str(path))


@dataclass(frozen=True)
class ConeParams:
    """Shape of a synthetic spectrum.

    kind "laplace": eigenvalues in {Re z > -shift, |Im z| <= aperture (Re z + shift)}
    with moduli in [r_min, r_max].  kind "dirac": square roots of such a
    Laplace-type cloud with random signs, so the squares lie in the cone.
    ``wide_angle`` adds that many dirac eigenvalues with Re(lambda^2) <= 0.
    ``weyl`` = (d, rank, vol) replaces the moduli by a Weyl-law profile
    N(c) = K c^(d/2).  ``symmetric`` emits +-lambda pairs.
    """

    kind: str = "laplace"
    shift: float = 0.0
    aperture: float = 0.5
    r_min: float = 0.5
    r_max: float = 10.0
    symmetric: bool = False
    wide_angle: int = 0
    max_mult: int = 1
    weyl: tuple[int, int, float] | None = field(default=None)


def weyl_constant(d: int, rank_bundle: int, vol: float) -> float:
    """Leading coefficient K of N(c) ~ K c^(d/2)."""
    return rank_bundle * vol / ((4 * math.pi) ** (d / 2) * math.gamma(d / 2 + 1))


def synthesize_operator_spectrum(
    seed: int, count: int, label: str = "A_sharp", cone: ConeParams | None = None
) -> OperatorSpectrum:
    cone = cone or ConeParams()
    if cone.kind not in ("laplace", "dirac"):
        raise ValidationError(f"unknown cone kind {cone.kind!r}")
    rng = np.random.default_rng(seed)
    # Opening half-angle of the cone around the positive axis (shift ignored for the angle).
    half_angle = math.atan(cone.aperture)
    if cone.weyl is not None:
        d, rank, vol = cone.weyl
        K = weyl_constant(d, rank, vol)
        u = rng.random(count)
        radii = ((np.arange(1, count + 1) - u) / K) ** (2.0 / d)
    else:
        radii = np.sort(np.exp(rng.uniform(math.log(cone.r_min), math.log(cone.r_max), count)))
    angles = rng.uniform(-half_angle, half_angle, count)
    laplace = radii * np.exp(1j * angles) - cone.shift
    mults = rng.integers(1, cone.max_mult + 1, count)
    if cone.kind == "laplace":
        values = list(laplace)
    else:
        roots = np.sqrt(laplace.astype(complex))
        signs = np.where(rng.random(count) < 0.5, -1.0, 1.0)
        values = list(signs * roots)
        if cone.wide_angle:
            r = np.exp(rng.uniform(math.log(cone.r_min), math.log(cone.r_max), cone.wide_angle)) ** 0.5
            phi = rng.uniform(0.3 * math.pi, 0.45 * math.pi, cone.wide_angle)
            phi *= np.where(rng.random(cone.wide_angle) < 0.5, -1.0, 1.0)
            signs = np.where(rng.random(cone.wide_angle) < 0.5, -1.0, 1.0)
            values += list(signs * r * np.exp(1j * phi))
            mults = np.concatenate([mults, rng.integers(1, cone.max_mult + 1, cone.wide_angle)])
    entries = [(complex(v), int(m)) for v, m in zip(values, mults)]
    if cone.symmetric:
        entries += [(-v, m) for v, m in entries]
    return OperatorSpectrum(tuple(entries), label)
