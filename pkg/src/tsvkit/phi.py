"""Rank-one modules Phi(lam, a, b, q, tau, gamma) on the carrier Q[s, t, v].

L0, M0 and Y0 act by multiplication with s, t and v.  For m != 0 the
actions are

* ``M_m . f = lam^m t f(s+m)``
* ``Y_m . f = lam^m [(m T + v + a m^2 t + b) f(s+m) + m t d_v f(s+m)]``
* ``L_m . f = lam^m [(s + D_m) f(s+m) - 3 m t d_t f(s+m)
  - m (m T + v + a m^2 t + b) d_v f(s+m) - (m^2/2) t d_v^2 f(s+m)]``

with ``T = sum_i tau_i v^i`` and ``D_m`` the exact quotient by t of an
explicit polynomial plus ``gamma_m`` (see :func:`l_numerator`).

Besides the direct actions this module holds the generic engine that
rebuilds an action from its values on 1, the bracket-compatibility
verifier, and the t-adic submodules with their quotients.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .algebra import FAMILIES, Generator, basis, bracket_basis
from .carrier import (
    CarrierPoly,
    S,
    T,
    V,
    d_dt,
    d_dv,
    exact_div_t,
    shift_s,
    shift_v,
    truncate_t,
)
from .scalars import A, B, LAM, ONE, ParamScalar, as_rational

__all__ = [
    "PhiParams",
    "InvalidParams",
    "ActionWindow",
    "WindowError",
    "IndexOutsideWindow",
    "TDependentInput",
    "MUTATIONS",
    "BracketFailure",
    "VerificationReport",
    "ClosureFailure",
    "ClosureReport",
    "l_numerator",
    "d_term",
    "act",
    "act_L",
    "act_M",
    "act_Y",
    "act_generic",
    "window_from_params",
    "verify_module",
    "submodule_check",
    "act_quotient",
    "induced_quotient_action",
    "filtration_check",
    "closing_gamma_series",
    "monomial_grid",
]

MUTATIONS = ("drop-dt", "drop-d2v", "flip-sign-YY", "perturb-gamma")


class InvalidParams(ValueError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)


class WindowError(ValueError):
    """Structurally malformed action window."""


class IndexOutsideWindow(IndexError):
    pass


class TDependentInput(ValueError):
    """A quotient action was given a polynomial involving t."""


def _tpoly(x, where: str) -> CarrierPoly:
    if isinstance(x, str):
        from .formats import parse_poly

        x = parse_poly(x)
    x = CarrierPoly.coerce(x)
    if not x.free_of("s", "v"):
        raise InvalidParams(f"{where} must be a polynomial in t alone", where)
    return x


def _gamma_items(g: Mapping[int, object] | None, where: str) -> tuple[tuple[int, CarrierPoly], ...]:
    out = {}
    for m, poly in (g or {}).items():
        if type(m) is not int:
            raise InvalidParams(f"{where} keys must be integers", where)
        poly = _tpoly(poly, f"{where}[{m}]")
        if poly:
            out[m] = poly
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class PhiParams:
    """Parameters of one module; build with :meth:`make`.

    ``gamma`` is the finitely supported part of m -> gamma_m.  The optional
    ``gamma_series`` {k: G_k} adds ``m^k G_k(t)`` for every m != 0, which is
    how infinitely supported but polynomial-in-m families are stored.
    """

    lam: ParamScalar
    a: ParamScalar
    b: ParamScalar
    tau: tuple[CarrierPoly, ...]
    gamma: tuple[tuple[int, CarrierPoly], ...] = ()
    gamma_series: tuple[tuple[int, CarrierPoly], ...] = ()

    @classmethod
    def make(cls, lam=LAM, a=A, b=B, tau=(0,), gamma=None, gamma_series=None, q: int | None = None) -> "PhiParams":
        lam, a, b = (ParamScalar.coerce(x) for x in (lam, a, b))
        if not lam.is_unit():
            raise InvalidParams("lambda must be invertible (a nonzero rational or the symbol lam)", "lambda")
        tau = [_tpoly(x, f"tau[{i}]") for i, x in enumerate(tau)]
        if q is not None:
            if q < 0 or len(tau) > q + 1:
                raise InvalidParams(f"q = {q} does not fit {len(tau)} tau entries", "q")
            tau += [CarrierPoly()] * (q + 1 - len(tau))
        if not tau:
            raise InvalidParams("at least tau[0] is required", "tau")
        series = _gamma_items(gamma_series, "gamma_series")
        if any(k < 0 for k, _ in series):
            raise InvalidParams("gamma_series exponents must be non-negative", "gamma_series")
        return cls(lam, a, b, tuple(tau), _gamma_items(gamma, "gamma"), series)

    @property
    def q(self) -> int:
        return len(self.tau) - 1

    def validate(self) -> "PhiParams":
        """Raise :class:`InvalidParams` unless tau_i, gamma_j lie in t*Q[t] and gamma_0 = 0."""
        for i, x in enumerate(self.tau):
            if x.min_degree_in("t") == 0:
                raise InvalidParams(f"tau in t*Q[t] violated: tau[{i}] = {x} has a constant term", f"tau[{i}]")
        for m, x in self.gamma:
            if x.min_degree_in("t") == 0:
                raise InvalidParams(f"gamma in t*Q[t] violated: gamma[{m}] = {x} has a constant term", f"gamma[{m}]")
            if m == 0:
                raise InvalidParams("gamma_0 = 0 violated", "gamma[0]")
        for k, x in self.gamma_series:
            if x.min_degree_in("t") == 0:
                raise InvalidParams(
                    f"gamma in t*Q[t] violated: gamma_series[{k}] = {x} has a constant term", f"gamma_series[{k}]"
                )
        return self

    def is_valid(self) -> bool:
        try:
            self.validate()
        except InvalidParams:
            return False
        return True

    def tau_poly(self) -> CarrierPoly:
        return _tau_poly(self.tau)

    def gamma_at(self, m: int) -> CarrierPoly:
        if m == 0:
            return CarrierPoly()
        out = dict(self.gamma).get(m, CarrierPoly())
        for k, g in self.gamma_series:
            out = out + g * (m**k)
        return out

    def canonical(self) -> "PhiParams":
        """Trailing zero tau entries trimmed (tau[0] always kept)."""
        tau = list(self.tau)
        while len(tau) > 1 and not tau[-1]:
            tau.pop()
        return PhiParams(self.lam, self.a, self.b, tuple(tau), self.gamma, self.gamma_series)

    def restricted(self, N: int) -> "PhiParams":
        """Finite gamma holding gamma_m for |m| <= N only: what a radius-N window can determine."""
        gamma = {m: self.gamma_at(m) for m in range(-N, N + 1) if m}
        return PhiParams.make(lam=self.lam, a=self.a, b=self.b, tau=self.tau, gamma=gamma)

    def specialize(self, lam0=None, a0=None, b0=None) -> "PhiParams":
        """Substitute rationals for any of the symbols lam, a, b."""
        conv = [None if x is None else ParamScalar.const(as_rational(x)) for x in (lam0, a0, b0)]
        if conv[0] is not None and not conv[0]:
            raise InvalidParams("lambda must be nonzero", "lambda")

        def sub_s(x: ParamScalar) -> ParamScalar:
            return x.substitute(*conv)

        def sub_p(x: CarrierPoly) -> CarrierPoly:
            return x.substitute_params(*conv)

        return PhiParams.make(
            lam=sub_s(self.lam),
            a=sub_s(self.a),
            b=sub_s(self.b),
            tau=[sub_p(x) for x in self.tau],
            gamma={m: sub_p(g) for m, g in self.gamma},
            gamma_series={k: sub_p(g) for k, g in self.gamma_series},
        )


def closing_gamma_series(a, b, base=None) -> dict[int, CarrierPoly]:
    """gamma_m = m*base + 3ab m^2 t - (3/2) a^2 m^4 t^2, as a ``gamma_series`` mapping."""
    a, b = ParamScalar.coerce(a), ParamScalar.coerce(b)
    out = {1: CarrierPoly.coerce(base if base is not None else 0),
           2: T * (a * b * 3),
           4: T**2 * (a * a * Fraction(-3, 2))}
    return {k: g for k, g in out.items() if g}


@lru_cache(maxsize=256)
def _tau_poly(tau: tuple[CarrierPoly, ...]) -> CarrierPoly:
    out = CarrierPoly()
    for i, x in enumerate(tau):
        out = out + x * CarrierPoly.monomial(0, 0, i)
    return out


def l_numerator(tau: tuple[CarrierPoly, ...], a: ParamScalar, b: ParamScalar, m: int) -> CarrierPoly:
    """The polynomial whose quotient by t, after adding gamma_m, is D_m."""
    big_t = _tau_poly(tuple(tau))
    first = CarrierPoly()
    second = CarrierPoly()
    for i, x in enumerate(tau):
        vi1 = CarrierPoly.monomial(0, 0, i + 1)
        first = first + (x * Fraction(3 - (i + 1), i + 1) - d_dt(x).mul_t(1) * Fraction(3, i + 1)) * vi1
        if i:
            second = second + x * CarrierPoly.monomial(0, 1, i - 1) * i
    half_m = Fraction(m, 2)
    body = (
        first
        - second * half_m
        - big_t * big_t * half_m
        + T * V * (a * (3 * m))
        - (T * (a * m * m) + b) * big_t
    )
    return body * m


@lru_cache(maxsize=4096)
def _l_parts(params: PhiParams, m: int, mutation: str | None):
    gam = params.gamma_at(m)
    if mutation == "perturb-gamma" and m:
        gam = gam + T * (m * m)
    d_m = exact_div_t(l_numerator(params.tau, params.a, params.b, m) + gam)
    coef_dv = params.tau_poly() * m + V + T * (params.a * m * m) + params.b
    return params.lam**m, S + d_m, coef_dv * (-m)


@lru_cache(maxsize=4096)
def _y_part(params: PhiParams, m: int) -> CarrierPoly:
    out = params.tau_poly() * m + V + T * (params.a * m * m)
    return out + params.b if m else out


def d_term(params: PhiParams, m: int) -> CarrierPoly:
    """D_m; equal to act_L(params, m, 1) / lam^m - s."""
    return _l_parts(params, m, None)[1] - S


def act_M(params: PhiParams, m: int, f: CarrierPoly) -> CarrierPoly:
    return shift_s(f, m).mul_t(1) * params.lam**m


def act_Y(params: PhiParams, m: int, f: CarrierPoly, mutation: str | None = None) -> CarrierPoly:
    g = shift_s(f, m)
    out = _y_part(params, m) * g
    if m:
        sign = -m if mutation == "flip-sign-YY" else m
        out = out + d_dv(g).mul_t(1) * sign
    return out * params.lam**m


def act_L(params: PhiParams, m: int, f: CarrierPoly, mutation: str | None = None) -> CarrierPoly:
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; choose from {', '.join(MUTATIONS)}")
    lam_m, s_plus_d, coef_dv = _l_parts(params, m, mutation)
    g = shift_s(f, m)
    out = s_plus_d * g
    if m:
        if mutation != "drop-dt":
            out = out - d_dt(g).mul_t(1) * (3 * m)
        dv = d_dv(g)
        out = out + coef_dv * dv
        if mutation != "drop-d2v":
            out = out - d_dv(dv).mul_t(1) * Fraction(m * m, 2)
    return out * lam_m


def act(params: PhiParams, gen: Generator, f: CarrierPoly, mutation: str | None = None) -> CarrierPoly:
    if gen.family == "L":
        return act_L(params, gen.index, f, mutation)
    if gen.family == "Y":
        return act_Y(params, gen.index, f, mutation)
    return act_M(params, gen.index, f)


# -- generic engine --------------------------------------------------------

@dataclass(eq=True)
class ActionWindow:
    """Values (g_m, a_m, p_m) = (L_m.1, M_m.1, Y_m.1) for |m| <= N."""

    N: int
    entries: dict[int, tuple[CarrierPoly, CarrierPoly, CarrierPoly]] = field(default_factory=dict)

    def __post_init__(self):
        if type(self.N) is not int or self.N < 0:
            raise WindowError("N must be a non-negative integer")
        missing = [m for m in range(-self.N, self.N + 1) if m not in self.entries]
        if missing:
            raise WindowError(f"window of radius {self.N} lacks entries for m = {missing}")
        extra = [m for m in self.entries if abs(m) > self.N]
        if extra:
            raise WindowError(f"entries outside the radius: m = {sorted(extra)}")
        self.entries = {m: tuple(CarrierPoly.coerce(x) for x in self.entries[m]) for m in sorted(self.entries)}
        if self.entries[0] != (S, T, V):
            raise WindowError("the m = 0 entry must be (s, t, v)")

    def replace(self, m: int, g=None, a=None, p=None) -> "ActionWindow":
        old = self.entries[m]
        new = tuple(old[i] if x is None else CarrierPoly.coerce(x) for i, x in enumerate((g, a, p)))
        entries = dict(self.entries)
        entries[m] = new
        return ActionWindow(self.N, entries)


def window_from_params(params: PhiParams, N: int, mutation: str | None = None) -> ActionWindow:
    one = CarrierPoly.constant(1)
    entries = {}
    for m in range(-N, N + 1):
        entries[m] = (act_L(params, m, one, mutation), act_M(params, m, one), act_Y(params, m, one, mutation))
    return ActionWindow(N, entries)


def act_generic(window: ActionWindow, gen: Generator, u: CarrierPoly) -> CarrierPoly:
    """Extend the action on 1 to all of the carrier, generator by generator."""
    m = gen.index
    if abs(m) > window.N:
        raise IndexOutsideWindow(f"{gen} lies outside the window of radius {window.N}")
    g_m, a_m, p_m = window.entries[m]
    us = shift_s(u, m)
    if gen.family == "M":
        return us * a_m
    dv = d_dv(us)
    if gen.family == "Y":
        return dv * a_m * m + us * p_m
    return (
        d_dt(us) * a_m * (-3 * m)
        + us * g_m
        - dv * p_m * m
        - d_dv(dv) * a_m * Fraction(m * m, 2)
    )


# -- bracket compatibility -------------------------------------------------

def monomial_grid(D: int, variables: str = "stv") -> list[CarrierPoly]:
    exps = range(D + 1)
    out = []
    for i in exps if "s" in variables else (0,):
        for j in exps if "t" in variables else (0,):
            for k in exps if "v" in variables else (0,):
                out.append(CarrierPoly.monomial(i, j, k))
    return out


@dataclass(frozen=True)
class BracketFailure:
    x: Generator
    z: Generator
    monomial: tuple[int, int, int]
    residual: CarrierPoly

    @property
    def family(self) -> str:
        return f"[{self.x.family},{self.z.family}]"

    def describe(self) -> str:
        i, j, k = self.monomial
        return f"{self.family} {self.x} {self.z} f=s^{i}*t^{j}*v^{k}: residual {self.residual}"


@dataclass
class VerificationReport:
    N: int
    D: int
    checked: int
    failures: list[BracketFailure]

    @property
    def passed(self) -> bool:
        return not self.failures

    def families(self) -> list[str]:
        seen = {(FAMILIES.index(f.x.family), FAMILIES.index(f.z.family)): f.family for f in self.failures}
        return [seen[k] for k in sorted(seen)]


def _ordered_pairs(N: int, within_window: bool) -> list[tuple[Generator, Generator]]:
    gens = basis(N)
    pairs = []
    for n1, x in enumerate(gens):
        for z in gens[n1:]:
            if within_window and abs(x.index + z.index) > N:
                continue
            pairs.append((x, z))
    return pairs


def _sweep(act_fn: Callable[[Generator, CarrierPoly], CarrierPoly], pairs, monos) -> tuple[int, list[BracketFailure]]:
    first: dict[tuple[Generator, int], CarrierPoly] = {}

    def once(g: Generator, n: int) -> CarrierPoly:
        key = (g, n)
        if key not in first:
            first[key] = act_fn(g, monos[n])
        return first[key]

    failures = []
    checked = 0
    for x, z in pairs:
        for n, f in enumerate(monos):
            if x == z:
                checked += 1
                continue
            xz = act_fn(x, once(z, n))
            zx = act_fn(z, once(x, n))
            for left, right, p, sign in ((x, z, xz - zx, 1), (z, x, zx - xz, -1)):
                rhs = CarrierPoly()
                for c, w in bracket_basis(left, right):
                    rhs = rhs + once(w, n) * c
                res = p - rhs
                checked += 1
                if res:
                    failures.append(BracketFailure(left, right, next(iter(f.terms()))[0], res))
    return checked, failures


def _params_chunk(params: PhiParams, mutation, pairs, D):
    monos = monomial_grid(D)
    return _sweep(lambda g, f: act(params, g, f, mutation), pairs, monos)


def _worker_count(workers: int | None) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get("TSVKIT_WORKERS", "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def _sorted_failures(failures: Iterable[BracketFailure]) -> list[BracketFailure]:
    return sorted(failures, key=lambda f: (f.x.sort_key(), f.z.sort_key(), f.monomial))


def verify_module(
    params: PhiParams,
    N: int = 3,
    D: int = 2,
    mutation: str | None = None,
    within_window: bool = False,
    workers: int | None = None,
) -> VerificationReport:
    """Check X.(Z.f) - Z.(X.f) = [X, Z].f for all window generators and monomials of degree <= D.

    With ``within_window`` only pairs whose bracket index stays in [-N, N] are used.
    ``workers`` (default from ``TSVKIT_WORKERS``) splits the pairs across processes.
    """
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; choose from {', '.join(MUTATIONS)}")
    pairs = _ordered_pairs(N, within_window)
    nproc = _worker_count(workers)
    if nproc == 1:
        checked, failures = _params_chunk(params, mutation, pairs, D)
    else:
        chunks = [pairs[i::nproc] for i in range(nproc)]
        checked, failures = 0, []
        with ProcessPoolExecutor(nproc) as pool:
            for c, f in pool.map(_params_chunk, [params] * nproc, [mutation] * nproc, chunks, [D] * nproc):
                checked += c
                failures += f
    return VerificationReport(N, D, checked, _sorted_failures(failures))


def verify_window(window: ActionWindow, D: int = 2) -> VerificationReport:
    """The same compatibility sweep driven by :func:`act_generic`, for pairs inside the window."""
    pairs = _ordered_pairs(window.N, True)
    checked, failures = _sweep(lambda g, f: act_generic(window, g, f), pairs, monomial_grid(D))
    return VerificationReport(window.N, D, checked, _sorted_failures(failures))


# -- submodules and quotients ----------------------------------------------

@dataclass(frozen=True)
class ClosureFailure:
    gen: Generator
    monomial: tuple[int, int, int]
    output: CarrierPoly


@dataclass
class ClosureReport:
    kind: str
    checked: int
    failures: list[ClosureFailure]

    @property
    def passed(self) -> bool:
        return not self.failures


def submodule_check(params: PhiParams, k: int, N: int = 3, D: int = 2, mutation: str | None = None) -> ClosureReport:
    """Every action output on t^k * (monomial) must again be divisible by t^k."""
    failures, checked = [], 0
    for gen in basis(N):
        for f in monomial_grid(D):
            out = act(params, gen, f.mul_t(k), mutation)
            checked += 1
            if out and out.min_degree_in("t") < k:
                failures.append(ClosureFailure(gen, next(iter(f.terms()))[0], out))
    return ClosureReport(f"t^{k} submodule", checked, failures)


def _t_linear(x: CarrierPoly) -> CarrierPoly:
    return x.coeff_of("t", 1)


def act_quotient(params: PhiParams, k: int, gen: Generator, f: CarrierPoly) -> CarrierPoly:
    """Action on t^k Q[s,v] = t^k C[s,t,v] / t^{k+1} C[s,t,v], written on the s,v-part f."""
    if not f.free_of("t"):
        raise TDependentInput(f"quotient input must not involve t: {f}")
    m = gen.index
    if gen.family == "M":
        return CarrierPoly()
    lam_m = params.lam**m
    g = shift_s(f, m)
    if gen.family == "Y":
        lead = V + params.b if m else V
        return lead * g * lam_m
    vb = V + params.b
    tau1 = CarrierPoly()
    for i, x in enumerate(params.tau):
        tau1 = tau1 + _t_linear(x) * CarrierPoly.monomial(0, 0, i)
    mult = S + (-(vb * tau1) + V * (params.a * (3 * m))) * m + _t_linear(params.gamma_at(m)) - 3 * m * k
    return (mult * g - vb * d_dv(g) * m) * lam_m


def induced_quotient_action(params: PhiParams, k: int, gen: Generator, f: CarrierPoly) -> CarrierPoly:
    """Reference: act on t^k f, reduce mod t^{k+1}, divide by t^k."""
    out = truncate_t(act(params, gen, f.mul_t(k)), k + 1)
    for _ in range(k):
        out = exact_div_t(out)
    return out


def filtration_check(params: PhiParams, k: int, j: int, N: int = 3, D: int = 2) -> ClosureReport:
    """Quotient outputs on (v+b)^j * f must stay divisible by (v+b)^j."""
    vbj = (V + params.b) ** j
    failures, checked = [], 0
    for gen in basis(N):
        for f in monomial_grid(D, "sv"):
            out = act_quotient(params, k, gen, vbj * f)
            checked += 1
            if out and shift_v(out, -params.b).min_degree_in("v") < j:
                failures.append(ClosureFailure(gen, next(iter(f.terms()))[0], out))
    return ClosureReport(f"t^{k}(v+b)^{j} filtration", checked, failures)
