"""Text rendering, expression parsing and the JSON documents used by the CLI.

Text grammar (rendering and parsing agree):

* a scalar term is ``c * lam^i * a^j * b^k`` with unit factors omitted;
* a carrier term appends ``s^i * t^j * v^k``;
* terms are joined by ``" + "`` (a negative coefficient is shown as ``" - "``).

Parsing accepts any arithmetic expression over ``s, t, v`` (aliases ``L0,
M0, Y0``), ``lam`` (or ``λ``), ``a``, ``b`` and integer literals, with
``+ - * / ^ **`` and parentheses.  Division is only by invertible scalars
(nonzero rationals times powers of lam).
"""
from __future__ import annotations

import ast
import json
import re
from typing import Any

from .carrier import ALIASES, CarrierPoly, S, T, V
from .scalars import A, B, LAM, ParamScalar, as_rational

__all__ = [
    "InputError",
    "render_scalar",
    "render_poly",
    "parse_poly",
    "parse_scalar",
    "parse_generator",
    "poly_to_terms",
    "poly_from_terms",
    "tpoly_to_terms",
    "tpoly_from_terms",
    "params_to_doc",
    "params_from_doc",
    "window_to_doc",
    "window_from_doc",
    "load_json",
    "dump_json",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
MAX_EXPONENT = 1000


class InputError(ValueError):
    """Malformed user input; ``field`` names the offending location."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


# -- rendering -----------------------------------------------------------

def _fmt_rational(c) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _factor(name: str, e: int) -> str | None:
    if e == 0:
        return None
    return name if e == 1 else f"{name}^{e}"


def _join(parts: list[tuple[Any, list[str]]]) -> str:
    if not parts:
        return "0"
    out = []
    for n, (c, factors) in enumerate(parts):
        mag = abs(c)
        body = factors if mag == 1 and factors else [_fmt_rational(mag)] + factors
        text = " * ".join(body)
        if n == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


def _scalar_factors(exps) -> list[str]:
    return [f for f in (_factor("lam", exps[0]), _factor("a", exps[1]), _factor("b", exps[2])) if f]


def render_scalar(x: ParamScalar) -> str:
    """Render in descending lexicographic order on (e_lam, e_a, e_b)."""
    return _join([(c, _scalar_factors(e)) for e, c in x.terms()])


def render_poly(f: CarrierPoly) -> str:
    """Fully expanded; carrier monomials graded-lex descending, then scalar order."""
    parts = []
    for (i, j, k), coeff in f.terms():
        var = [x for x in (_factor("s", i), _factor("t", j), _factor("v", k)) if x]
        for e, c in coeff.terms():
            parts.append((c, _scalar_factors(e) + var))
    return _join(parts)


# -- parsing -------------------------------------------------------------

_NAMES = {"lam": CarrierPoly.constant(LAM), "λ": CarrierPoly.constant(LAM),
          "a": CarrierPoly.constant(A), "b": CarrierPoly.constant(B)}
_NAMES.update({alias: {"s": S, "t": T, "v": V}[var] for alias, var in ALIASES.items()})


def _int_exponent(node: ast.AST) -> int:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        if node.value > MAX_EXPONENT:
            raise InputError(f"exponent {node.value} exceeds the limit {MAX_EXPONENT}")
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _int_exponent(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    raise InputError("exponents must be integer literals")


def _unit_scalar(p: CarrierPoly) -> ParamScalar | None:
    try:
        x = p.as_scalar()
    except ValueError:
        return None
    return x if x.is_unit() else None


def _eval(node: ast.AST) -> CarrierPoly:
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant):
        if type(node.value) is not int:
            raise InputError(f"unsupported literal {node.value!r} (use integers and '/')")
        return CarrierPoly.constant(node.value)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise InputError(f"unknown symbol {node.id!r}")
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval(node.operand)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base, e = _eval(node.left), _int_exponent(node.right)
            if e < 0:
                unit = _unit_scalar(base)
                if unit is None:
                    raise InputError("negative powers are only allowed for invertible scalars")
                return CarrierPoly.constant(unit ** e)
            return base ** e
        left, right = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            unit = _unit_scalar(right)
            if unit is None:
                raise InputError("division is only by nonzero rationals or powers of lam")
            return left * unit.inverse()
    raise InputError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_poly(text: str) -> CarrierPoly:
    """Parse an expression such as ``"lam * t * (s + 1) - 3/2 * v^2"``."""
    if not isinstance(text, str) or not text.strip():
        raise InputError("empty polynomial expression")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree)


def parse_scalar(text) -> ParamScalar:
    if isinstance(text, (int,)) and not isinstance(text, bool):
        return ParamScalar.const(text)
    try:
        return parse_poly(str(text)).as_scalar()
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{text!r} is not a scalar (it involves s, t or v)") from None


_GEN_RE = re.compile(r"^\s*([LYM])\s*\[\s*([+-]?\d+)\s*\]\s*$")


def parse_generator(text: str):
    """``"L[2]"``, ``"Y[-1]"``, ``"M[0]"`` -> :class:`~tsvkit.algebra.Generator`."""
    from .algebra import Generator

    m = _GEN_RE.match(text or "")
    if not m:
        raise InputError(f"bad generator literal {text!r}; expected L[m], Y[m] or M[m]")
    return Generator(m.group(1), int(m.group(2)))


# -- term lists ----------------------------------------------------------

def poly_to_terms(f: CarrierPoly) -> list:
    return [[list(e), render_scalar(c)] for e, c in f.terms()]


def _scalar_field(x, field: str) -> ParamScalar:
    try:
        if isinstance(x, str):
            return parse_scalar(x)
        return ParamScalar.const(as_rational(x))
    except (InputError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc), field) from None


def poly_from_terms(terms, field: str = "terms") -> CarrierPoly:
    if isinstance(terms, str):
        try:
            return parse_poly(terms)
        except InputError as exc:
            raise InputError(str(exc), field) from None
    if not isinstance(terms, list):
        raise InputError("expected a list of [[i_s, i_t, i_v], coeff] pairs or an expression", field)
    out = CarrierPoly()
    for n, item in enumerate(terms):
        where = f"{field}[{n}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list) and len(item[0]) == 3):
            raise InputError("expected [[i_s, i_t, i_v], coeff]", where)
        exps = item[0]
        if not all(type(e) is int and e >= 0 for e in exps):
            raise InputError("exponents must be non-negative integers", where)
        out = out + CarrierPoly.monomial(*exps, c=_scalar_field(item[1], where))
    return out


def tpoly_to_terms(f: CarrierPoly) -> list:
    return [[e[1], render_scalar(c)] for e, c in sorted(f.terms(), key=lambda ec: ec[0][1])]


def tpoly_from_terms(terms, field: str) -> CarrierPoly:
    if isinstance(terms, str):
        f = poly_from_terms(terms, field)
    else:
        if not isinstance(terms, list):
            raise InputError("expected a list of [t_exponent, coeff] pairs", field)
        f = CarrierPoly()
        for n, item in enumerate(terms):
            where = f"{field}[{n}]"
            if not (isinstance(item, list) and len(item) == 2 and type(item[0]) is int and item[0] >= 0):
                raise InputError("expected [t_exponent, coeff]", where)
            f = f + CarrierPoly.monomial(0, item[0], 0, c=_scalar_field(item[1], where))
    if not f.free_of("s", "v"):
        raise InputError("must be a polynomial in t alone", field)
    return f


# -- documents -----------------------------------------------------------

def _sym_or_scalar(x: ParamScalar, symbol: ParamScalar) -> str:
    return "sym" if x == symbol else render_scalar(x)


def _read_sym(doc: dict, key: str, symbol: ParamScalar) -> ParamScalar:
    if key not in doc:
        raise InputError("missing field", key)
    val = doc[key]
    if val == "sym":
        return symbol
    return _scalar_field(val, key)


def _check_schema(doc, kind: str) -> None:
    if not isinstance(doc, dict):
        raise InputError(f"{kind} document must be a JSON object")
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {doc.get('schema')!r}", "schema")


def params_to_doc(params) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "lambda": _sym_or_scalar(params.lam, LAM),
        "a": _sym_or_scalar(params.a, A),
        "b": _sym_or_scalar(params.b, B),
        "q": params.q,
        "tau": [tpoly_to_terms(t) for t in params.tau],
        "gamma": {str(m): tpoly_to_terms(g) for m, g in params.gamma},
    }
    if params.gamma_series:
        doc["gamma_series"] = {str(k): tpoly_to_terms(g) for k, g in params.gamma_series}
    return doc


def _int_keyed(obj, field: str) -> dict[int, Any]:
    if not isinstance(obj, dict):
        raise InputError("expected an object keyed by integers", field)
    out = {}
    for key, val in obj.items():
        try:
            out[int(key)] = val
        except ValueError:
            raise InputError(f"key {key!r} is not an integer", field) from None
    return out


def params_from_doc(doc, validate: bool = True):
    """Build :class:`~tsvkit.phi.PhiParams`; ``validate`` enforces tau, gamma in tQ[t]."""
    from .phi import InvalidParams, PhiParams

    _check_schema(doc, "params")
    lam = _read_sym(doc, "lambda", LAM)
    a = _read_sym(doc, "a", A)
    b = _read_sym(doc, "b", B)
    q = doc.get("q")
    if type(q) is not int or q < 0:
        raise InputError("q must be a non-negative integer", "q")
    tau_doc = doc.get("tau")
    if not isinstance(tau_doc, list):
        raise InputError("expected a list of q+1 polynomials", "tau")
    if len(tau_doc) != q + 1:
        raise InputError(f"expected q+1 = {q + 1} entries, got {len(tau_doc)}", "tau")
    tau = [tpoly_from_terms(t, f"tau[{i}]") for i, t in enumerate(tau_doc)]
    gamma = {m: tpoly_from_terms(g, f"gamma[{m}]") for m, g in _int_keyed(doc.get("gamma", {}), "gamma").items()}
    series = {k: tpoly_from_terms(g, f"gamma_series[{k}]")
              for k, g in _int_keyed(doc.get("gamma_series", {}), "gamma_series").items()}
    try:
        params = PhiParams.make(lam=lam, a=a, b=b, tau=tau, gamma=gamma, gamma_series=series)
        if validate:
            params.validate()
    except InvalidParams as exc:
        raise InputError(str(exc), exc.field) from None
    return params


def window_to_doc(window) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "N": window.N,
        "entries": {
            str(m): {"g": poly_to_terms(g), "a": poly_to_terms(a), "p": poly_to_terms(p)}
            for m, (g, a, p) in sorted(window.entries.items())
        },
    }


def window_from_doc(doc):
    from .phi import ActionWindow, WindowError

    _check_schema(doc, "window")
    n = doc.get("N")
    if type(n) is not int or n < 0:
        raise InputError("N must be a non-negative integer", "N")
    entries = {}
    for m, ent in _int_keyed(doc.get("entries"), "entries").items():
        if not isinstance(ent, dict) or not {"g", "a", "p"} <= set(ent):
            raise InputError("entry needs g, a and p", f"entries[{m}]")
        entries[m] = tuple(poly_from_terms(ent[k], f"entries[{m}].{k}") for k in ("g", "a", "p"))
    try:
        return ActionWindow(n, entries)
    except WindowError as exc:
        raise InputError(str(exc), "entries") from None


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", path) from None


def _dump(doc: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(doc, dict) and doc:
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_dump(v, depth + 1)}" for k, v in doc.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(doc, list) and any(isinstance(x, dict) or _is_term_list(x) for x in doc):
        return "[\n" + ",\n".join(inner + _dump(x, depth + 1) for x in doc) + "\n" + pad + "]"
    return json.dumps(doc, ensure_ascii=False)


def _is_term_list(x: Any) -> bool:
    return isinstance(x, list) and any(isinstance(y, list) for y in x) and len(x) > 1


def dump_json(doc: Any) -> str:
    """Indented JSON with each polynomial term list kept on one line per term."""
    return _dump(doc, 0) + "\n"
