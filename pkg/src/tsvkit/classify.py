"""Recognize an action window as one of the Phi modules, and compare parameter sets.

The pipeline is a sequence of stages, each a necessary condition on the
window data (g_m, a_m, p_m); the first failing stage stops it:

======  ==============================================================
tag     condition
======  ==============================================================
L3.2    a_m != 0
L3.3    a_m free of s
L3.4    a_m free of v, p_m free of s
L3.5    g_m has s-degree 1 and its s-coefficient is free of v
L3.6    a_m = lam^m t, with lam read off a_1
L3.9    p_m = lam^m (m T + v + a m^2 t + b) with T in tQ[t][v]
L3.10   t (g_m lam^-m - s) - numerator_m = R_m in tQ[t], R_0 = 0
verify  the fitted module reproduces the window and passes the
        bracket sweep inside the window
======  ==============================================================
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .carrier import CarrierPoly, S, T, V, degree_in
from .formats import params_to_doc, poly_to_terms
from .phi import ActionWindow, PhiParams, l_numerator, verify_module, window_from_params
from .scalars import ParamScalar

__all__ = [
    "Stage",
    "RecognitionReport",
    "PShapeMismatch",
    "GShapeMismatch",
    "PFit",
    "IsoResult",
    "check_shapes",
    "extract_lambda",
    "fit_p",
    "fit_g",
    "recognize",
    "iso_check",
]


@dataclass(frozen=True)
class Stage:
    tag: str
    passed: bool
    witness: str = ""


class PShapeMismatch(ValueError):
    def __init__(self, message: str, m: int | None = None, residual: CarrierPoly | None = None):
        self.m, self.residual = m, residual
        super().__init__(message)


class GShapeMismatch(ValueError):
    def __init__(self, message: str, m: int | None = None, residual: CarrierPoly | None = None):
        self.m, self.residual = m, residual
        super().__init__(message)


@dataclass
class RecognitionReport:
    stages: list[Stage] = field(default_factory=list)
    fitted: PhiParams | None = None
    residuals: dict[int, CarrierPoly] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.fitted is not None

    def failed_stage(self) -> Stage | None:
        return next((s for s in self.stages if not s.passed), None)

    def render_text(self) -> str:
        lines = []
        for st in self.stages:
            status = "pass" if st.passed else "FAIL"
            lines.append(f"{st.tag:<7}{status}" + (f"  {st.witness}" if st.witness else ""))
        lines.append("result: " + ("recognized" if self.passed else "rejected"))
        return "\n".join(lines)

    def to_doc(self) -> dict:
        return {
            "schema": 1,
            "stages": [{"tag": s.tag, "passed": s.passed, "witness": s.witness} for s in self.stages],
            "recognized": self.passed,
            "fitted": params_to_doc(self.fitted) if self.fitted is not None else None,
            "residuals": {str(m): poly_to_terms(r) for m, r in sorted(self.residuals.items())},
        }


# -- shape stages ----------------------------------------------------------

def extract_lambda(window: ActionWindow) -> ParamScalar | None:
    """lam from a_1 = lam * t; None unless a_1 is an invertible multiple of t."""
    if window.N < 1:
        return None
    a1 = window.entries[1][1]
    terms = list(a1.terms())
    if len(terms) != 1 or terms[0][0] != (0, 1, 0) or not terms[0][1].is_unit():
        return None
    return terms[0][1]


def _first_bad(window: ActionWindow, pred) -> str | None:
    for m, entry in window.entries.items():
        msg = pred(m, *entry)
        if msg:
            return f"m={m}: {msg}"
    return None


def _lemma_32(m, g, a, p):
    return "a_m = 0" if not a else None


def _lemma_33(m, g, a, p):
    return f"a_m = {a} depends on s" if degree_in(a, "s") > 0 else None


def _lemma_34(m, g, a, p):
    if degree_in(a, "v") > 0:
        return f"a_m = {a} depends on v"
    if degree_in(p, "s") > 0:
        return f"p_m = {p} depends on s"
    return None


def _lemma_35(m, g, a, p):
    if degree_in(g, "s") != 1:
        return f"g_m = {g} does not have s-degree 1"
    if not g.coeff_of("s", 1).free_of("v"):
        return f"s-coefficient of g_m = {g.coeff_of('s', 1)} depends on v"
    return None


def check_shapes(window: ActionWindow) -> list[Stage]:
    """Run L3.2 to L3.6 in order, stopping after the first failure."""
    stages = []
    for tag, pred in (("L3.2", _lemma_32), ("L3.3", _lemma_33), ("L3.4", _lemma_34), ("L3.5", _lemma_35)):
        bad = _first_bad(window, pred)
        stages.append(Stage(tag, bad is None, bad or ""))
        if bad:
            return stages
    lam = extract_lambda(window)
    if lam is None:
        a1 = window.entries[1][1] if window.N >= 1 else None
        stages.append(Stage("L3.6", False, f"m=1: a_1 = {a1} is not an invertible multiple of t"))
        return stages
    bad = _first_bad(window, lambda m, g, a, p: None if a == T * lam**m else f"a_m = {a}, expected {T * lam**m}")
    stages.append(Stage("L3.6", bad is None, bad or f"lambda = {lam}"))
    return stages


# -- fitting ---------------------------------------------------------------

@dataclass(frozen=True)
class PFit:
    q: int
    tau: tuple[CarrierPoly, ...]
    a: ParamScalar
    b: ParamScalar

    @property
    def T(self) -> CarrierPoly:
        out = CarrierPoly()
        for i, x in enumerate(self.tau):
            out = out + x * CarrierPoly.monomial(0, 0, i)
        return out


def fit_p(window: ActionWindow, lam: ParamScalar) -> PFit:
    """Separate p_m lam^-m - v into its odd part m T and even part a m^2 t + b."""
    if window.N < 2:
        raise PShapeMismatch(f"window radius {window.N} is below the minimum 2 needed for fitting")
    r = {m: window.entries[m][2] * lam ** (-m) - V for m in window.entries}
    big_t = (r[1] - r[-1]) * Fraction(1, 2)
    free = big_t.coeff_of("t", 0)
    if free:
        raise PShapeMismatch(f"T_i in t*Q[t] violated: T has the t-free part {free}", 1, free)
    even = (r[1] + r[-1]) * Fraction(1, 2)
    if not even.free_of("s", "v") or degree_in(even, "t") > 1:
        raise PShapeMismatch(f"(r_1 + r_-1)/2 = {even} is not of the form a*t + b", 1, even)
    a, b = even.coeff(0, 1, 0), even.coeff(0, 0, 0)
    even2 = (r[2] + r[-2]) * Fraction(1, 2) - (T * (a * 4) + b)
    if even2:
        raise PShapeMismatch(f"(r_2 + r_-2)/2 - (4a*t + b) = {even2} is nonzero", 2, even2)
    for m, (_, _, p) in window.entries.items():
        if not m:
            continue
        res = p - (big_t * m + V + T * (a * m * m) + b) * lam**m
        if res:
            raise PShapeMismatch(f"p_{m} deviates from the fitted closed form by {res}", m, res)
    q = max(degree_in(big_t, "v"), 0)
    tau = tuple(big_t.coeff_of("v", i) for i in range(q + 1))
    return PFit(q, tau, a, b)


def fit_g(window: ActionWindow, lam: ParamScalar, a: ParamScalar, b: ParamScalar, tau) -> dict[int, CarrierPoly]:
    """Residuals R_m = t(g_m lam^-m - s) - numerator_m; each must lie in tQ[t]."""
    out = {}
    for m, (g, _, _) in window.entries.items():
        res = (g * lam ** (-m) - S).mul_t(1) - l_numerator(tuple(tau), a, b, m)
        if not res.free_of("s", "v"):
            raise GShapeMismatch(f"R_{m} = {res} depends on s or v", m, res)
        if res.coeff_of("t", 0):
            raise GShapeMismatch(f"R_{m} = {res} has a constant term", m, res)
        if m == 0 and res:
            raise GShapeMismatch(f"R_0 = {res} is nonzero", 0, res)
        out[m] = res
    return out


def recognize(window: ActionWindow, D: int = 2) -> RecognitionReport:
    report = RecognitionReport()
    report.stages = check_shapes(window)
    if not all(s.passed for s in report.stages):
        return report
    lam = extract_lambda(window)
    try:
        pf = fit_p(window, lam)
    except PShapeMismatch as exc:
        report.stages.append(Stage("L3.9", False, (f"m={exc.m}: " if exc.m is not None else "") + str(exc)))
        return report
    report.stages.append(Stage("L3.9", True, f"q={pf.q} a={pf.a} b={pf.b}"))
    try:
        rs = fit_g(window, lam, pf.a, pf.b, pf.tau)
    except GShapeMismatch as exc:
        report.stages.append(Stage("L3.10", False, f"m={exc.m}: {exc}"))
        if exc.residual is not None:
            report.residuals[exc.m] = exc.residual
        return report
    report.residuals = rs
    report.stages.append(Stage("L3.10", True))
    fitted = PhiParams.make(lam=lam, a=pf.a, b=pf.b, tau=pf.tau, gamma={m: r for m, r in rs.items() if m})
    if window_from_params(fitted, window.N) != window:
        report.stages.append(Stage("verify", False, "fitted parameters do not reproduce the window"))
        return report
    ver = verify_module(fitted, window.N, D, within_window=True)
    if not ver.passed:
        first = ver.failures[0]
        report.stages.append(
            Stage("verify", False, f"{len(ver.failures)} failures in {', '.join(ver.families())}; first: {first.describe()}")
        )
        return report
    report.stages.append(Stage("verify", True, f"{ver.checked} bracket checks"))
    report.fitted = fitted.canonical()
    return report


# -- isomorphism -----------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: str | None
    raw_equal: bool
    note: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def _components(p: PhiParams):
    yield "lambda", p.lam
    yield "a", p.a
    yield "b", p.b
    yield "q", p.q


def iso_check(x: PhiParams, y: PhiParams) -> IsoResult:
    """Compare canonical parameter tuples; the witness names the first differing component."""
    raw_equal = x == y
    cx, cy = x.canonical(), y.canonical()
    witness = None
    for (name, u), (_, w) in zip(_components(cx), _components(cy)):
        if u != w:
            witness = name
            break
    if witness is None:
        witness = next((f"tau[{i}]" for i, (u, w) in enumerate(zip(cx.tau, cy.tau)) if u != w), None)
    if witness is None:
        gx, gy = dict(cx.gamma), dict(cy.gamma)
        witness = next((f"gamma[{m}]" for m in sorted(set(gx) | set(gy)) if gx.get(m) != gy.get(m)), None)
    if witness is None:
        sx, sy = dict(cx.gamma_series), dict(cy.gamma_series)
        witness = next((f"gamma_series[{k}]" for k in sorted(set(sx) | set(sy)) if sx.get(k) != sy.get(k)), None)
    note = ""
    if witness is None and not raw_equal:
        note = "raw tuples differ only by trailing zero tau entries"
    return IsoResult(witness is None, witness, raw_equal, note)
