"""Command-line front end.

Exit status: 0 success, 1 verification counterexample or oracle/route
mismatch, 2 usage or parse error, 3 precondition violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .diagram import DiagramError
from .dot import export_dot
from .gluing import GluingError, bracket, bracket_partial, diff_op, self_closure
from .lmo import (LmoError, RouteMismatch, SeifertInput, gaussian_integrate, lens_space_primitive,
                  seifert_primitive)
from .oracle import naive_series_op
from .series import SeriesError, exp, log, primitive_part
from .textio import ParseError, format_series, parse_diagrams, parse_matrix, parse_series, read_text
from .verify import CAMPAIGNS, VerifyConfig, verify

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class Mismatch(Exception):
    """An operator result differs from its naive cross-check."""


def _colors(arg):
    return [c for c in arg.replace(",", " ").split() if c]


def _library(args) -> dict:
    lib: dict = {}
    for path in args.diagrams or ():
        text, src = read_text(path)
        lib.update(parse_diagrams(text, src))
    return lib


def _series(path, lib, args):
    text, src = read_text(path)
    s = parse_series(text, src, lib)
    if args.colors:
        s = s.with_colors(_colors(args.colors))
    return s


def _emit(s, lib, args):
    text = format_series(s, lib, inline=not args.no_inline)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cross_check(kind, fast, s1, s2=None, X=None):
    naive = naive_series_op(kind, s1, s2, X, fast.trunc)
    if naive.terms != fast.terms:
        raise Mismatch(f"{kind}: fast and naive results differ")


def _gluing(args, op):
    lib = _library(args)
    s1 = _series(args.left, lib, args)
    s2 = _series(args.right, lib, args) if op != "close" else None
    trunc = args.max_degree
    if op == "bracket":
        out = bracket(s1, s2, trunc)
        kind, X = "bracket", None
    elif op == "bracket-x":
        X = _colors(args.glue)
        out = bracket_partial(s1, s2, X, trunc)
        kind = "partial"
    elif op == "dop":
        out = diff_op(s1, s2, trunc)
        kind, X = "diff", None
    else:
        out = self_closure(s1, trunc)
        kind, X = "close", None
    if args.oracle:
        _cross_check(kind, out, s1, s2, X)
    if args.connected:
        out = primitive_part(out)
    _emit(out, lib, args)


def _unary(args, fn):
    lib = _library(args)
    s = _series(args.series, lib, args)
    if args.max_degree is not None:
        s = s.truncate(args.max_degree)
    _emit(fn(s), lib, args)


def _cmd_verify(args):
    cfg = VerifyConfig(seed=args.seed, trunc=args.max_degree or 3,
                       colors=tuple(_colors(args.colors or "x")), num_trials=args.trials,
                       which=args.which)
    report = verify(cfg)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def _cmd_lens(args):
    out = lens_space_primitive(args.p, args.q, args.max_degree, check_routes=args.check_routes)
    _emit(out, _library(args), args)


def _pair(text):
    try:
        p, q = text.split(",")
        return int(p), int(q)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q got {text!r}") from None


def _cmd_seifert(args):
    inp = SeifertInput(args.b, args.pair or [], Fraction(args.lambda_omega))
    _emit(seifert_primitive(inp, args.max_degree), _library(args), args)


def _cmd_gaussian(args):
    lib = _library(args)
    C = _series(args.series, lib, args)
    text, src = read_text(args.matrix)
    L = parse_matrix(text, src)
    _emit(gaussian_integrate(C, L, args.max_degree), lib, args)


def _cmd_export_dot(args):
    text, src = read_text(args.file)
    diagrams = parse_diagrams(text, src)
    if not diagrams:
        raise ParseError(src, 1, "no diagrams in file")
    name = args.name or next(iter(diagrams))
    if name not in diagrams:
        raise ParseError(src, 1, f"no diagram named {name!r}")
    sys.stdout.write(export_dot(diagrams[name], name))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None, metavar="N",
                        help="output truncation degree")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--colors", default=None, help="color set, e.g. 'y1 y2' or y1,y2")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check against the naive enumeration")
    common.add_argument("--diagrams", action="append", metavar="FILE",
                        help="diagram library file (repeatable)")
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--no-inline", action="store_true",
                        help="omit diagram blocks from series output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="unitri", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("bracket", "full pairing of two series"),
                        ("bracket-x", "partial pairing along chosen colors"),
                        ("dop", "diagrammatic differential operator")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--connected", action="store_true", help="keep only the primitive part")
        if name == "bracket-x":
            p.add_argument("--glue", required=True, help="colors to glue")
        p.set_defaults(run=lambda a, n=name: _gluing(a, n))
    p = sub.add_parser("close", parents=[common], help="self-closure of a series")
    p.add_argument("left")
    p.add_argument("--connected", action="store_true")
    p.set_defaults(run=lambda a: _gluing(a, "close"))

    for name, fn in (("exp", exp), ("log", log), ("primitive", primitive_part)):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a series")
        p.add_argument("series")
        p.set_defaults(run=lambda a, f=fn: _unary(a, f))

    p = sub.add_parser("verify", parents=[common], help="randomized identity campaign")
    p.add_argument("--which", choices=CAMPAIGNS, default="main")
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("lens", parents=[common], help="primitive series of a lens space")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--check-routes", action="store_true",
                   help="also compute the single-bracket form and compare")
    p.set_defaults(run=_cmd_lens, max_degree_default=3)

    p = sub.add_parser("seifert", parents=[common], help="primitive series of a Seifert space")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--pair", type=_pair, action="append", metavar="P,Q")
    p.add_argument("--lambda", dest="lambda_omega", default="0",
                   help="Casson-Walker value (rational)")
    p.set_defaults(run=_cmd_seifert, max_degree_default=2)

    p = sub.add_parser("gaussian", parents=[common], help="formal Gaussian integration")
    p.add_argument("series", help="primitive series C")
    p.add_argument("--matrix", required=True, help="linking-matrix file")
    p.set_defaults(run=_cmd_gaussian, max_degree_default=2)

    p = sub.add_parser("export-dot", parents=[common], help="DOT text for a diagram")
    p.add_argument("file")
    p.add_argument("--name", default=None)
    p.set_defaults(run=_cmd_export_dot)
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.max_degree is None and hasattr(args, "max_degree_default"):
        args.max_degree = args.max_degree_default
    try:
        status = args.run(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Mismatch, RouteMismatch) as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except (GluingError, SeriesError, LmoError, DiagramError, ValueError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK if status is None else status


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
