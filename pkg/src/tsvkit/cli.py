"""Command-line entry point ``tsvkit``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for malformed input or usage errors.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
from typing import Sequence

from .algebra import JACOBI_LIMIT, jacobi_check
from .carrier import CarrierPoly, NotDivisibleByT, degree_in
from .classify import iso_check, recognize
from .formats import (
    InputError,
    dump_json,
    load_json,
    params_from_doc,
    params_to_doc,
    parse_generator,
    poly_from_terms,
    poly_to_terms,
    window_from_doc,
    window_to_doc,
)
from .phi import (
    MUTATIONS,
    IndexOutsideWindow,
    InvalidParams,
    TDependentInput,
    act,
    act_generic,
    act_quotient,
    filtration_check,
    induced_quotient_action,
    submodule_check,
    verify_module,
    window_from_params,
)
from .scalars import ZeroLambda
from .straighten import straighten, straighten_oracle

OK, MATH_FAIL, INPUT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def _load_params(args, required: bool = True):
    if not getattr(args, "params", None):
        if required:
            raise InputError("--params is required")
        return None
    params = params_from_doc(load_json(args.params))
    if getattr(args, "concrete", None):
        lam0, a0, b0 = args.concrete
        try:
            params = params.specialize(lam0, a0, b0)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad --concrete values: {exc}", "--concrete") from None
    return params


def _load_poly(args) -> CarrierPoly:
    if args.f is not None:
        f = poly_from_terms(args.f, "--f")
    elif args.poly:
        doc = load_json(args.poly)
        if not isinstance(doc, dict) or not ("poly" in doc or "terms" in doc):
            raise InputError("polynomial document needs a 'poly' or 'terms' field", args.poly)
        f = poly_from_terms(doc.get("poly", doc.get("terms")), "poly" if "poly" in doc else "terms")
    else:
        raise InputError("give the polynomial with --f EXPR or --poly FILE")
    worst = max((degree_in(f, var) for var in "stv"), default=0)
    if worst > args.max_degree:
        raise InputError(f"degree {worst} exceeds --max-degree {args.max_degree}", "poly")
    return f


def _emit_poly(args, poly: CarrierPoly) -> None:
    if args.format == "json":
        sys.stdout.write(dump_json({"schema": 1, "poly": str(poly), "terms": poly_to_terms(poly)}))
    else:
        print(poly)


def cmd_act(args) -> int:
    gen = parse_generator(args.gen)
    f = _load_poly(args)
    if args.window:
        out = act_generic(window_from_doc(load_json(args.window)), gen, f)
    else:
        out = act(_load_params(args), gen, f, args.mutate)
    _emit_poly(args, out)
    return OK


def cmd_straighten(args) -> int:
    gen = parse_generator(args.gen)
    f = _load_poly(args)
    result = (straighten_oracle if args.oracle else straighten)(gen, f)
    if args.format == "json":
        terms = [{"generator": str(g), "poly": str(p), "terms": poly_to_terms(p)} for p, g in result.terms]
        sys.stdout.write(dump_json({"schema": 1, "result": str(result), "terms": terms}))
    else:
        print(result)
    return OK


def _print_report(args, kind: str, passed: bool, checked: int, lines: list[str], extra: dict | None = None) -> int:
    if args.format == "json":
        doc = {"schema": 1, "check": kind, "passed": passed, "checked": checked, "failures": lines}
        doc.update(extra or {})
        sys.stdout.write(dump_json(doc))
    else:
        print(f"{kind}: {'PASS' if passed else 'FAIL'} ({checked} checks, {len(lines)} failures)")
        for line in lines:
            print("  " + line)
    return OK if passed else MATH_FAIL


def _jacobi(args, n: int) -> int:
    if n > JACOBI_LIMIT:
        raise InputError(f"N must be at most {JACOBI_LIMIT}", "N")
    rep = jacobi_check(n)
    lines = [f"{x} {y} {z}: {res}" for x, y, z, res in rep.failures]
    return _print_report(args, f"jacobi N={n}", rep.passed, rep.checked, lines)


def _closure_lines(rep) -> list[str]:
    return [f"{fl.gen} f=s^{fl.monomial[0]}*t^{fl.monomial[1]}*v^{fl.monomial[2]}: {fl.output}" for fl in rep.failures]


def cmd_verify(args) -> int:
    if args.jacobi is not None:
        return _jacobi(args, args.jacobi)
    _check_window_args(args)
    params = _load_params(args)
    if args.submodule is not None:
        rep = submodule_check(params, args.submodule, args.N, args.D, args.mutate)
        return _print_report(args, rep.kind, rep.passed, rep.checked, _closure_lines(rep))
    if args.filtration is not None:
        k, j = args.filtration
        rep = filtration_check(params, k, j, args.N, args.D)
        return _print_report(args, rep.kind, rep.passed, rep.checked, _closure_lines(rep))
    rep = verify_module(params, args.N, args.D, mutation=args.mutate, within_window=args.within_window)
    return _print_report(
        args,
        f"module N={args.N} D={args.D}" + (f" mutate={args.mutate}" if args.mutate else ""),
        rep.passed,
        rep.checked,
        [f.describe() for f in rep.failures],
        {"families": rep.families()},
    )


def cmd_jacobi(args) -> int:
    return _jacobi(args, args.N)


def cmd_classify(args) -> int:
    window = window_from_doc(load_json(args.window))
    rep = recognize(window, args.D)
    if args.format == "json":
        sys.stdout.write(dump_json(rep.to_doc()))
    else:
        print(rep.render_text())
        if rep.fitted is not None:
            sys.stdout.write(dump_json(params_to_doc(rep.fitted)))
    return OK if rep.passed else MATH_FAIL


def cmd_iso(args) -> int:
    x = params_from_doc(load_json(args.first))
    y = params_from_doc(load_json(args.second))
    res = iso_check(x, y)
    if args.format == "json":
        sys.stdout.write(dump_json({"schema": 1, "isomorphic": res.isomorphic, "witness": res.witness,
                                    "raw_equal": res.raw_equal, "note": res.note}))
    else:
        print("isomorphic" if res.isomorphic else f"not isomorphic: differ in {res.witness}")
        if res.note:
            print(f"note: {res.note}")
    return OK if res.isomorphic else MATH_FAIL


def cmd_quotient(args) -> int:
    params = _load_params(args)
    gen = parse_generator(args.gen)
    f = _load_poly(args)
    out = act_quotient(params, args.k, gen, f)
    if args.check:
        ref = induced_quotient_action(params, args.k, gen, f)
        if ref != out:
            print(f"quotient action {out} differs from the induced action {ref}", file=sys.stderr)
            _emit_poly(args, out)
            return MATH_FAIL
    _emit_poly(args, out)
    return OK


def cmd_export_window(args) -> int:
    _check_window_args(args)
    params = _load_params(args)
    text = dump_json(window_to_doc(window_from_params(params, args.N, args.mutate)))
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write: {exc.strerror}", args.output) from None
    else:
        sys.stdout.write(text)
    return OK


def _check_window_args(args) -> None:
    if getattr(args, "N", 1) < 1:
        raise InputError("N must be at least 1", "N")
    if getattr(args, "D", 0) < 0:
        raise InputError("D must be non-negative", "D")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tsvkit", description="Exact computations with the tsv algebra and its Phi modules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, params=True, poly=False, window=False):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if params:
            p.add_argument("--params", metavar="FILE", help="parameters document (JSON)")
            p.add_argument("--concrete", nargs=3, metavar=("LAM", "A", "B"),
                           help="specialize lam, a, b to rationals such as 2 or -1/3")
        if poly:
            p.add_argument("--gen", required=True, help="generator literal such as L[2], Y[-1], M[0]")
            p.add_argument("--f", metavar="EXPR", help="polynomial expression in s, t, v, lam, a, b")
            p.add_argument("--poly", metavar="FILE", help="polynomial document (JSON)")
            p.add_argument("--max-degree", type=int, default=64, help="reject inputs of higher degree (default 64)")
        if window:
            p.add_argument("-N", type=int, default=3, help="window radius (default 3)")
            p.add_argument("-D", type=int, default=2, help="max exponent of test monomials (default 2)")

    p = sub.add_parser("act", help="apply a generator to a polynomial")
    common(p, poly=True)
    p.add_argument("--window", metavar="FILE", help="use the generic engine on a window document")
    p.add_argument("--mutate", choices=MUTATIONS)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("straighten", help="normal-order X_m times a carrier polynomial")
    common(p, params=False, poly=True)
    p.add_argument("--oracle", action="store_true", help="use the letter-by-letter commutation route")
    p.set_defaults(func=cmd_straighten)

    p = sub.add_parser("verify", help="bracket compatibility and submodule checks")
    common(p, window=True)
    p.add_argument("--mutate", choices=MUTATIONS)
    p.add_argument("--within-window", action="store_true", help="only pairs with |m+n| <= N")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--jacobi", type=int, metavar="N", help="run the Jacobi sweep instead")
    group.add_argument("--submodule", type=int, metavar="K", help="check closure of t^K C[s,t,v]")
    group.add_argument("--filtration", type=int, nargs=2, metavar=("K", "J"),
                       help="check closure of t^K (v+b)^J in the quotient")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("jacobi", help="Jacobi identity on all basis triples")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-N", type=int, default=3)
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("classify", help="recognize a window document")
    p.add_argument("window", metavar="WINDOW")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-D", type=int, default=2)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("iso", help="decide isomorphism of two parameter documents")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("quotient", help="action on t^k C[s,t,v] / t^(k+1) C[s,t,v]")
    common(p, poly=True)
    p.add_argument("-k", type=int, default=0)
    p.add_argument("--check", action="store_true", help="compare with the induced action")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("export-window", help="write the window (L_m.1, M_m.1, Y_m.1), |m| <= N")
    common(p, window=True)
    p.add_argument("--mutate", choices=MUTATIONS)
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_export_window)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    buffer = io.StringIO()
    try:
        with contextlib.redirect_stdout(buffer):
            code = args.func(args)
    except (InputError, InvalidParams, TDependentInput, IndexOutsideWindow, ZeroLambda, NotDivisibleByT) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = INPUT_ERROR
    except (ValueError, OverflowError, ZeroDivisionError, RecursionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = INPUT_ERROR
    try:
        sys.stdout.write(buffer.getvalue())
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. `| head`); keep the exit code, silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
