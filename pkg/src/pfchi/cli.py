"""pfchi command line.

Exit codes: 0 ok, 1 parse error, 2 evaluation error, 3 resource bound, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import geometry as G
from . import logic as L
from .config import bound, enumeration_bound
from .errors import FormulaSyntaxError, PfchiError, SingularCurve, SortError, TooLarge, UnboundVariable
from .euler import FormulaSet, Report, verify_axioms
from .gf import prime_power
from .padic import dual_chi, principal_chi
from .torsion import verify_trace_count, verify_trace_count_p
from .zeta import ZetaData, fit_curve_lpoly, fit_rational_zeta

EXIT_PARSE, EXIT_EVAL, EXIT_RESOURCE, EXIT_VERIFY = 1, 2, 3, 4

BUILTINS = {
    "legendre-surface": G.legendre_surface,
    "gm": G.gm,
    "affine-line": G.affine_line,
    "projective-line": G.projective_line,
}


@dataclass(frozen=True)
class RunConfig:
    enumeration_bound: int
    output: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.enumeration_bound < 1:
            raise ValueError("enumeration bound must be at least 1")


class _ParseFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _emit(cfg: RunConfig, value, text: str | None = None):
    if cfg.output == "json":
        print(json.dumps(value))
    elif cfg.output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if isinstance(value, list) and value and isinstance(value[0], dict):
            keys = list(value[0])
            w.writerow(keys)
            for row in value:
                w.writerow([row[k] for k in keys])
        elif isinstance(value, dict):
            w.writerow(["key", "value"])
            for k, v in value.items():
                w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        else:
            w.writerow([value])
        sys.stdout.write(buf.getvalue())
    else:
        print(text if text is not None else value)


def _emit_report(cfg: RunConfig, rep: Report) -> int:
    if cfg.output == "text":
        for r in rep.records:
            status = "PASS" if r["pass"] else "FAIL"
            print(f"{status} mod {r['modulus']}: {r['check']}: {r['lhs']} vs {r['rhs']}")
        print(f"{len(rep.records) - len(rep.failures())}/{len(rep.records)} checks passed")
    else:
        _emit(cfg, rep.records)
    return 0 if rep.passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# sources


def _source(args):
    """A curve (Weierstrass) or a ConstructibleSpec from --curve / --builtin / --file."""
    picked = [x for x in (args.curve, args.builtin, args.file) if x]
    if len(picked) != 1:
        raise _ParseFailure("give exactly one of --curve, --builtin, --file")
    if args.file:
        try:
            spec = G.load_spec(args.file)
        except ValueError as exc:
            raise _ParseFailure(str(exc))
        if args.q is not None and args.q != spec.q:
            raise _ParseFailure(f"--q {args.q} disagrees with the file's base field F_{spec.q}")
        return spec
    if args.q is None:
        raise _ParseFailure("--q is required")
    if args.curve:
        try:
            curve = G.parse_curve(args.curve, args.q)
        except (ValueError, SyntaxError) as exc:
            raise _ParseFailure(str(exc))
        if curve.is_singular():
            raise SingularCurve(f"{curve} is singular")
        return curve
    if args.builtin not in BUILTINS:
        raise _ParseFailure(f"unknown builtin {args.builtin!r}; choose from {', '.join(BUILTINS)}")
    return BUILTINS[args.builtin](args.q)


def _zeta_of(src, args) -> ZetaData:
    if isinstance(src, G.Weierstrass):
        g = 1 if args.genus is None else args.genus
        if g != 1:
            raise _ParseFailure("Weierstrass curves have genus 1")
        n = args.counts_upto or 3
        counts = [G.count_elliptic(src, n=i) for i in range(1, n + 1)]
        return fit_curve_lpoly(counts, 1, src.q)
    n = args.counts_upto or 5
    counts = [G.count_points(src, i) for i in range(1, n + 1)]
    if args.genus is not None:
        return fit_curve_lpoly(counts, args.genus, src.q)
    return fit_rational_zeta(counts, (n - 1) // 2, src.q)


def _moduli(text: str) -> list[int]:
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _ParseFailure(f"bad --moduli {text!r}")
    if not out or any(n < 1 for n in out):
        raise _ParseFailure("moduli must be positive integers")
    return out


# ---------------------------------------------------------------------------
# commands


def command_eval(args, cfg: RunConfig) -> int:
    if bool(args.formula) == bool(args.file):
        raise _ParseFailure("give exactly one of --formula, --file")
    text = args.formula if args.formula else open(args.file, encoding="utf-8").read()
    f = L.parse(text.strip())
    free = L.parse_free_vars([v for v in (args.free or "").split(",") if v.strip()])
    if args.count_mod is not None:
        value = L.count_mod(f, free, args.q, args.count_mod)
        _emit(cfg, value, str(value))
    elif free:
        value = L.count_solutions(f, free, args.q)
        _emit(cfg, value, str(value))
    else:
        value = L.evaluate(f, args.q)
        _emit(cfg, value, "true" if value else "false")
    return 0


def command_zeta(args, cfg: RunConfig) -> int:
    z = _zeta_of(_source(args), args)
    _emit(cfg, z.to_dict(), z.to_json())
    return 0


def command_chi(args, cfg: RunConfig) -> int:
    src = _source(args)
    moduli = _moduli(args.moduli) if args.moduli else []
    if args.ell is not None:
        moduli.append(args.ell ** (args.k or 1))
    if not moduli:
        raise _ParseFailure("chi needs --moduli or --ell/--k")
    p, _ = prime_power(src.q)
    if isinstance(src, G.Weierstrass):
        z = _zeta_of(src, args)
        value = principal_chi(z, moduli)
    elif any(n % p == 0 for n in moduli):
        value = principal_chi(src, moduli, _zeta_of(src, args))
    else:
        value = principal_chi(src, moduli)
    _emit(cfg, value.to_dict(), value.to_json())
    return 0


def command_dualchi(args, cfg: RunConfig) -> int:
    z = _zeta_of(_source(args), args)
    value: Fraction = dual_chi(z)
    text = f"{value.numerator}/{value.denominator}"
    _emit(cfg, text, text)
    return 0


def _curves(q: int, rng: random.Random, limit: int | None):
    """Nonsingular short Weierstrass curves over a prime field (all, or a seeded sample)."""
    found = [c for c in (G.Weierstrass.from_list([a, b], q) for a in range(q) for b in range(q))
             if not c.is_singular()]
    if limit and len(found) > limit:
        found = rng.sample(found, limit)
    return found


def command_verify(args, cfg: RunConfig) -> int:
    from sympy import primerange

    rng = random.Random(cfg.seed)
    rep = Report()
    if args.suite == "trace-count":
        if args.ell is not None:
            moduli = [(args.ell, args.k or 1)]
        else:
            moduli = [(2, 2), (3, 2), (5, 1)]
        for q in primerange(5, args.q_max + 1):
            for curve in _curves(q, rng, args.curves):
                for ell, k in moduli:
                    if q % ell:
                        rep.extend(verify_trace_count(curve, ell, k, seed=cfg.seed))
    elif args.suite == "trace-count-p":
        s = args.k or 2
        for p in primerange(3, args.q_max + 1):
            q = p**s
            curves = [G.Weierstrass(q, 0, a2, 0, a4, a6)
                      for a2, a4, a6 in itertools.product(range(q), repeat=3)]
            curves = [c for c in curves if not c.is_singular()]
            if args.curves and len(curves) > args.curves:
                curves = rng.sample(curves, args.curves)
            for curve in curves:
                rep.extend(verify_trace_count_p(curve, p, s, use_torsion=False))
    elif args.suite == "axioms":
        moduli = _moduli(args.moduli or "2,3,4,5,6,9")
        for q in primerange(3, args.q_max + 1):
            sets = [FormulaSet.of("x*x = 1", ["x:K1"]),
                    FormulaSet.of("exists y:K1. y*y = x", ["x:K1"]),
                    FormulaSet.of("x*x*x = x", ["x:K1"]),
                    G.gm(q), G.affine_line(q)]
            rep.extend(verify_axioms(sets, q, moduli))
    else:
        raise _ParseFailure(f"unknown suite {args.suite!r}")
    return _emit_report(cfg, rep)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfchi", description="Counting, zeta data and Euler characteristics over finite fields.")
    ap.add_argument("--output", choices=["text", "json", "csv"], default="text")
    ap.add_argument("--bound", type=int, default=None, help="enumeration bound (default: PFCHI_BOUND or 10^7)")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        # accept the global flags after the subcommand too
        p.add_argument("--output", choices=["text", "json", "csv"], default=argparse.SUPPRESS)
        p.add_argument("--bound", type=int, default=argparse.SUPPRESS)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    e = sub.add_parser("eval", help="evaluate a sentence or count a formula's solutions")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--formula")
    e.add_argument("--file")
    e.add_argument("--free", help="free variables, e.g. x:K1,y:K2")
    e.add_argument("--count-mod", type=int)
    common(e)

    for name, helptext in (("zeta", "fit zeta data from point counts"),
                           ("chi", "principal Euler characteristic"),
                           ("dualchi", "dual Euler characteristic (exact rational)")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--q", type=int)
        s.add_argument("--curve", help='Weierstrass equation, e.g. "y^2 = x^3 + x"')
        s.add_argument("--builtin", help=f"one of {', '.join(BUILTINS)}")
        s.add_argument("--file", help="variety file")
        s.add_argument("--genus", type=int)
        s.add_argument("--counts-upto", type=int)
        s.add_argument("--ell", type=int)
        s.add_argument("--k", type=int)
        if name == "chi":
            s.add_argument("--moduli", help="comma-separated moduli, e.g. 4,9,5")
        common(s)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=["trace-count", "trace-count-p", "axioms"])
    v.add_argument("--q-max", type=int, default=13)
    v.add_argument("--ell", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--moduli")
    v.add_argument("--curves", type=int, default=12, help="seeded sample of at most this many curves per field (0 = all)")
    common(v)
    return ap


COMMANDS = {
    "eval": command_eval,
    "zeta": command_zeta,
    "chi": command_chi,
    "dualchi": command_dualchi,
    "verify": command_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    try:
        cfg = RunConfig(args.bound or enumeration_bound(), args.output, args.seed)
        with bound(cfg.enumeration_bound):
            return COMMANDS[args.command](args, cfg)
    except (_ParseFailure, FormulaSyntaxError, SortError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TooLarge as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (PfchiError, UnboundVariable, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
