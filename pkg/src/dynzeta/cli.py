"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 numerical failure.
Errors are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import spectra, zetafun
from .errors import DomainError, DynZetaError, ParseError
from .geodata import (
    ConeParams,
    dumps_length_spectrum,
    dumps_operator_spectrum,
    load_length_spectrum,
    load_operator_spectrum,
    synthesize_length_spectrum,
    synthesize_operator_spectrum,
)
from .plancherel import casimir_shift, plancherel_polynomial
from .repkit import MIrrep

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

ZETA_KINDS = {
    "selberg": zetafun.log_selberg,
    "ruelle": zetafun.log_ruelle,
    "symmetrized": zetafun.log_symmetrized,
    "super": zetafun.log_super_zeta,
    "super-ruelle": zetafun.log_super_ruelle,
}

VERIFY_KINDS = (
    "selberg-funceq",
    "symmetrized-funceq",
    "super-funceq",
    "ruelle-funceq",
    "conjecture",
    "euler-char",
    "plancherel-sum",
    "ruelle-factorization",
)


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- argument types -----------------------------------------------------------------


def complex_arg(text: str) -> complex:
    """'re,im' or 're'."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")


def weight_arg(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals but got {text!r}") from None


def _sigma(args) -> MIrrep:
    weight = args.sigma if args.sigma is not None else (0,) * ((args.d - 1) // 2)
    return MIrrep.of(args.d, weight)


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


# --- parser -------------------------------------------------------------------------

# Every flag each subcommand accepts; the help-completeness test checks this table.
FLAG_REGISTRY: dict[str, list[str]] = {}


def _add(parser: argparse.ArgumentParser, key: str, *flags: str, **kw) -> None:
    parser.add_argument(*flags, **kw)
    FLAG_REGISTRY.setdefault(key, []).append(flags[0])


def _common(p: argparse.ArgumentParser, key: str, fmt: bool = True) -> None:
    _add(p, key, "--d", type=int, required=True, help="odd dimension d >= 3 of the hyperbolic manifold")
    _add(p, key, "--out", type=Path, help="write the result to this file instead of stdout")
    if fmt:
        _add(p, key, "--format", choices=("json", "csv"), default="json", help="output format (default json)")


def build_parser() -> argparse.ArgumentParser:
    FLAG_REGISTRY.clear()
    parser = _Parser(prog="dynzeta", description="Twisted dynamical zeta functions, spectral determinants and their identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plancherel", help="Plancherel polynomial of an M-type")
    _common(p, "plancherel")
    _add(p, "plancherel", "--sigma", type=weight_arg, help="highest weight, comma-separated (default trivial)")

    p = sub.add_parser("zeta", help="evaluate a zeta function from a length spectrum")
    _add(p, "zeta", "kind", metavar="kind", choices=sorted(ZETA_KINDS), help="which zeta function: %(choices)s")
    _common(p, "zeta")
    _add(p, "zeta", "--in", dest="input", type=Path, required=True, help="length-spectrum JSON Lines file")
    _add(p, "zeta", "--sigma", type=weight_arg, help="highest weight of sigma (default trivial)")
    _add(p, "zeta", "--s", type=complex_arg, action="append", required=True, help="evaluation point re,im (repeatable)")
    _add(p, "zeta", "--tail-tol", type=float, default=1e-12, help="bound on the dropped Euler-product tail")

    p = sub.add_parser("det", help="regularized determinant det(A + s^2)")
    _common(p, "det")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", type=Path, help="operator-spectrum JSON file")
    src.add_argument("--model", choices=("riemann", "harmonic"), help="built-in model spectrum")
    FLAG_REGISTRY["det"] += ["--in", "--model"]
    _add(p, "det", "--s", type=complex_arg, action="append", required=True, help="point re,im (repeatable)")

    p = sub.add_parser("eta", help="eta function and invariant of a first-order spectrum")
    _common(p, "eta")
    _add(p, "eta", "--in", dest="input", type=Path, required=True, help="operator-spectrum JSON file")
    _add(p, "eta", "--s", type=complex_arg, action="append", default=None, help="point re,im (repeatable, default 0)")
    _add(p, "eta", "--theta", type=float, help="Agmon angle in radians (default: widest gap)")

    p = sub.add_parser("synth", help="write a synthetic length or operator spectrum")
    ssub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = ssub.add_parser("length", help="synthetic length spectrum (JSON Lines)")
    _common(q, "synth length", fmt=False)
    _add(q, "synth length", "--seed", type=int, required=True, help="random seed")
    _add(q, "synth length", "--count", type=int, required=True, help="number of primitive geodesics")
    _add(q, "synth length", "--dim-chi", type=int, default=1, help="dimension of the twist (default 1)")
    _add(q, "synth length", "--vol-x", type=float, default=1.0, help="volume of X (default 1)")
    _add(q, "synth length", "--nonunitary", action="store_true", help="twist eigenvalues in the annulus 1/2..2")
    q = ssub.add_parser("operator", help="synthetic operator spectrum (JSON)")
    _common(q, "synth operator", fmt=False)
    _add(q, "synth operator", "--seed", type=int, required=True, help="random seed")
    _add(q, "synth operator", "--count", type=int, required=True, help="number of eigenvalues")
    _add(q, "synth operator", "--label", default="A_sharp", help="operator label (default A_sharp)")
    _add(q, "synth operator", "--kind", choices=("laplace", "dirac"), default="laplace", help="cone type")
    _add(q, "synth operator", "--aperture", type=float, default=0.5, help="cone aperture |Im| <= a Re")
    _add(q, "synth operator", "--shift", type=float, default=0.0, help="cone translate C")
    _add(q, "synth operator", "--symmetric", action="store_true", help="emit +-lambda pairs")
    _add(q, "synth operator", "--wide-angle", type=int, default=0, help="extra Dirac eigenvalues with Re(lambda^2) <= 0")
    _add(q, "synth operator", "--weyl-rank", type=int, help="Weyl-law radii for a bundle of this rank")

    p = sub.add_parser("verify", help="run a verification experiment")
    _add(p, "verify", "kind", metavar="kind", choices=VERIFY_KINDS, help="which identity: %(choices)s")
    _common(p, "verify")
    _add(p, "verify", "--config", type=Path, help="ExperimentConfig JSON; flags below override it")
    _add(p, "verify", "--sigma", type=weight_arg, help="highest weight of sigma (default trivial)")
    _add(p, "verify", "--seed", type=int, help="seed for synthetic data")
    _add(p, "verify", "--dim-chi", type=int, help="dimension of the twist")
    _add(p, "verify", "--vol-x", type=float, help="volume of X")
    _add(p, "verify", "--s", type=complex_arg, action="append", help="grid point re,im (repeatable)")
    _add(p, "verify", "--tol", type=float, help="residual tolerance")
    _add(p, "verify", "--fault", help="inject a named fault (negative control)")
    _add(p, "verify", "--singular", action="store_true", help="conjecture: plant a zero of a determinant at s = 0")
    return parser


# --- output -------------------------------------------------------------------------


def _emit(args, obj, rows=None, header=None) -> None:
    if getattr(args, "format", "json") == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(obj, indent=2) + "\n"
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------------------


def cmd_plancherel(args) -> int:
    sigma = _sigma(args)
    P = plancherel_polynomial(sigma, args.d)
    coeffs = [str(c) for c in P.coeffs] + ["0"] * (args.d - 1 - P.degree)
    obj = {
        "d": args.d,
        "sigma": [str(c) for c in sigma.weight],
        "dim": sigma.dim,
        "coefficients": coeffs,
        "is_even": P.is_even,
        "casimir_shift": str(casimir_shift(sigma, args.d).value),
    }
    _emit(args, obj, [[k, c] for k, c in enumerate(coeffs)], ["power", "coefficient"])
    return EXIT_OK


def cmd_zeta(args) -> int:
    spec = load_length_spectrum(args.input)
    if spec.d != args.d:
        raise DomainError(f"--d {args.d} does not match the file header d={spec.d}")
    sigma = _sigma(args)
    fn = ZETA_KINDS[args.kind]
    results = []
    for s in args.s:
        ev = fn(spec, sigma, s, args.tail_tol)
        abscissa = ev.convergence_abscissa
        results.append(
            {
                "s": _pair(s),
                "log_value": _pair(ev.value),
                "truncation_bound": ev.truncation_bound,
                "n_terms": ev.n_terms,
                "convergence_abscissa": abscissa if abscissa > -float("inf") else None,
            }
        )
    obj = {"kind": args.kind, "d": args.d, "sigma": [str(c) for c in sigma.weight], "results": results}
    rows = [[*r["s"], *r["log_value"], r["truncation_bound"], r["n_terms"]] for r in results]
    _emit(args, obj, rows, ["s_re", "s_im", "log_re", "log_im", "truncation_bound", "n_terms"])
    return EXIT_OK


def cmd_det(args) -> int:
    spec = spectra.ModelSpectrum(args.model) if args.model else load_operator_spectrum(args.input)
    results = []
    for s in args.s:
        ld = spectra.log_determinant(spec, s)
        results.append({"s": _pair(s), "log_det": _pair(ld), "det": _pair(spectra.regularized_determinant(spec, s))})
    obj = {"source": args.model or str(args.input), "results": results}
    rows = [[*r["s"], *r["log_det"], *r["det"]] for r in results]
    _emit(args, obj, rows, ["s_re", "s_im", "log_det_re", "log_det_im", "det_re", "det_im"])
    return EXIT_OK


def cmd_eta(args) -> int:
    spec = load_operator_spectrum(args.input)
    angle = spectra.AgmonAngle.for_spectrum(spec, args.theta) if args.theta is not None else spectra.choose_agmon_angle(spec)
    grid = args.s or [0j]
    res = spectra.eta_result(spec, angle, grid)
    e0, e1 = spectra.eta_split(spec, angle, 0)
    results = [{"s": _pair(s), "eta": _pair(v)} for s, v in res.value_at.items()]
    obj = {
        "theta": angle.theta,
        "clearance": angle.epsilon,
        "eta_invariant": _pair(res.eta_invariant),
        "eta0_at_0": _pair(e0),
        "eta1_at_0": _pair(e1),
        "results": results,
    }
    rows = [[*r["s"], *r["eta"]] for r in results]
    _emit(args, obj, rows, ["s_re", "s_im", "eta_re", "eta_im"])
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.what == "length":
        spec = synthesize_length_spectrum(args.seed, args.count, args.d, args.dim_chi, not args.nonunitary, args.vol_x)
        text = dumps_length_spectrum(spec)
    else:
        weyl = (args.d, args.weyl_rank, 1.0) if args.weyl_rank else None
        cone = ConeParams(
            kind=args.kind,
            shift=args.shift,
            aperture=args.aperture,
            symmetric=args.symmetric,
            wide_angle=args.wide_angle,
            weyl=weyl,
        )
        text = dumps_operator_spectrum(synthesize_operator_spectrum(args.seed, args.count, args.label, cone))
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _config(args):
    from . import harness

    obj = {}
    if args.config is not None:
        try:
            obj = json.loads(args.config.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"{args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.config}:{exc.lineno}: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ParseError(f"{args.config}: config must be a JSON object")
        if "d" in obj and int(obj["d"]) != args.d:
            raise DomainError(f"--d {args.d} does not match the config d={obj['d']}")
    obj["d"] = args.d
    if args.sigma is not None:
        obj["sigma"] = [str(c) for c in args.sigma]
    for key in ("seed", "dim_chi", "vol_x", "fault"):
        if getattr(args, key) is not None:
            obj[key] = getattr(args, key)
    if args.singular:
        obj["singular"] = True
    if args.s:
        obj["s_grid"] = [_pair(s) for s in args.s]
    if args.tol is not None:
        obj["tolerances"] = dict(obj.get("tolerances", {}), residual=args.tol)
    return harness.ExperimentConfig.from_json(obj)


def cmd_verify(args) -> int:
    from . import harness

    kind = args.kind
    if kind == "euler-char":
        report = harness.verify_euler_characteristic(args.d)
    elif kind == "plancherel-sum":
        report = harness.verify_plancherel_sum(_sigma(args), args.d)
    else:
        config = _config(args)
        fn = {
            "selberg-funceq": harness.verify_selberg_funceq,
            "symmetrized-funceq": harness.verify_symmetrized_funceq,
            "super-funceq": harness.verify_super_funceq,
            "ruelle-funceq": harness.verify_ruelle_funceq,
            "conjecture": harness.verify_conjecture_experiment,
            "ruelle-factorization": harness.verify_ruelle_factorization,
        }[kind]
        report = fn(config)
    obj = report.to_json()
    rows = [[i, p.get("residual")] for i, p in enumerate(report.per_point_residuals)]
    _emit(args, obj, rows, ["point", "residual"])
    return EXIT_FAIL if report.passed is False else EXIT_OK


COMMANDS = {
    "plancherel": cmd_plancherel,
    "zeta": cmd_zeta,
    "det": cmd_det,
    "eta": cmd_eta,
    "synth": cmd_synth,
    "verify": cmd_verify,
}


def _fail(err: DynZetaError) -> int:
    sys.stderr.write(json.dumps(err.to_json()) + "\n")
    return err.exit_code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except DynZetaError as err:
        return _fail(err)
    except (OverflowError, FloatingPointError, ArithmeticError) as exc:
        return _fail(DynZetaError(f"{type(exc).__name__}: {exc}"))


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
