"""Sparse polynomials in s, t, v over Q[lam^{+-1}, a, b].

The carrier variables double as the Cartan generators acting by
multiplication: ``s = L0``, ``t = M0``, ``v = Y0`` (see ``ALIASES``).

Internally a polynomial is one flat dict from packed exponent keys to
mpq coefficients.  A key holds six 32-bit fields ``(s, t, v, lam, a, b)``;
the low three are exactly a :class:`~tsvkit.scalars.ParamScalar` key, so
multiplication of monomials is integer addition minus one offset.
"""
from __future__ import annotations

from math import comb
from typing import Iterator, Mapping

from gmpy2 import mpq

from .scalars import (
    EXP_LIMIT,
    FIELD,
    MASK,
    ONE_KEY,
    SCALAR_BITS,
    SCALAR_MASK,
    ExponentOverflow,
    ParamScalar,
    as_rational,
)

__all__ = [
    "CarrierPoly",
    "NotDivisibleByT",
    "NegInfinity",
    "NEG_INF",
    "ALIASES",
    "S",
    "T",
    "V",
    "shift_s",
    "d_ds",
    "d_dt",
    "d_dv",
    "exact_div_t",
    "degree_in",
    "truncate_t",
    "shift_v",
    "from_key_terms",
]

S_SHIFT = SCALAR_BITS + 2 * FIELD
T_SHIFT = SCALAR_BITS + FIELD
V_SHIFT = SCALAR_BITS
S_UNIT = 1 << S_SHIFT
T_UNIT = 1 << T_SHIFT
V_UNIT = 1 << V_SHIFT
_SHIFTS = {"s": S_SHIFT, "t": T_SHIFT, "v": V_SHIFT}

# one vocabulary for the carrier: L0, M0, Y0 act on 1 as s, t, v
ALIASES = {"L0": "s", "M0": "t", "Y0": "v", "s": "s", "t": "t", "v": "v"}


class NotDivisibleByT(ArithmeticError):
    """Raised when a term without a factor t is divided by t."""

    def __init__(self, term: "CarrierPoly"):
        self.term = term
        super().__init__(f"term {term} is not divisible by t")


class NegInfinity:
    """Degree of the zero polynomial; compares below every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __lt__(self, other):
        return not isinstance(other, NegInfinity)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, NegInfinity)

    def __eq__(self, other):
        return isinstance(other, NegInfinity)

    def __hash__(self):
        return hash("NegInfinity")

    def __repr__(self):
        return "NegInfinity"


NEG_INF = NegInfinity()


def _pack(i: int, j: int, k: int, skey: int = ONE_KEY) -> int:
    if not (0 <= i < EXP_LIMIT and 0 <= j < EXP_LIMIT and 0 <= k < EXP_LIMIT):
        raise ExponentOverflow(f"carrier exponent out of range: s^{i} t^{j} v^{k}")
    return (i << S_SHIFT) | (j << T_SHIFT) | (k << V_SHIFT) | skey


def _unpack(key: int) -> tuple[int, int, int]:
    return key >> S_SHIFT, (key >> T_SHIFT) & MASK, (key >> V_SHIFT) & MASK


class CarrierPoly:
    """Immutable sparse polynomial in s, t, v with ParamScalar coefficients.

    >>> shift_s(S**2, 1)
    CarrierPoly('s^2 + 2 * s + 1')
    """

    __slots__ = ("_d", "_hash", "_span")

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        d: dict[int, mpq] = {}
        for (i, j, k), c in (terms or {}).items():
            c = ParamScalar.coerce(c)
            for skey, sc in c._d.items():
                key = _pack(i, j, k, skey)
                acc = d.get(key, 0) + sc
                if acc:
                    d[key] = acc
                else:
                    d.pop(key, None)
        self._d = d
        self._hash = None
        self._span = None

    @classmethod
    def _raw(cls, d: dict[int, mpq]) -> "CarrierPoly":
        obj = object.__new__(cls)
        obj._d = d
        obj._hash = None
        obj._span = None
        return obj

    @classmethod
    def constant(cls, c) -> "CarrierPoly":
        c = ParamScalar.coerce(c)
        return cls._raw(dict(c._d))

    @classmethod
    def monomial(cls, i: int, j: int, k: int, c=1) -> "CarrierPoly":
        return cls({(i, j, k): c})

    @classmethod
    def coerce(cls, x) -> "CarrierPoly":
        if isinstance(x, CarrierPoly):
            return x
        return cls.constant(x)

    # -- inspection -------------------------------------------------------
    def terms(self) -> Iterator[tuple[tuple[int, int, int], ParamScalar]]:
        """Yield ``((i_s, i_t, i_v), coefficient)``, graded-lex descending."""
        groups: dict[tuple[int, int, int], dict[int, mpq]] = {}
        for key, c in self._d.items():
            groups.setdefault(_unpack(key), {})[key & SCALAR_MASK] = c
        order = sorted(groups, key=lambda e: (sum(e), e), reverse=True)
        for e in order:
            yield e, ParamScalar._raw(groups[e])

    def coeff(self, i: int, j: int, k: int) -> ParamScalar:
        lo, hi = _pack(i, j, k, 0), _pack(i, j, k, 0) + (1 << SCALAR_BITS)
        return ParamScalar._raw({key & SCALAR_MASK: c for key, c in self._d.items() if lo <= key < hi})

    def coeff_of(self, var: str, power: int) -> "CarrierPoly":
        """Coefficient of ``var**power`` as a polynomial in the other variables."""
        shift = _SHIFTS[ALIASES[var]]
        d = {}
        for key, c in self._d.items():
            if (key >> shift) & MASK == power:
                d[key - (power << shift)] = c
        return CarrierPoly._raw(d)

    def monomial_count(self) -> int:
        return len({key >> SCALAR_BITS for key in self._d})

    def __len__(self) -> int:
        return len(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def free_of(self, *variables: str) -> bool:
        return all(degree_in(self, var) <= 0 for var in variables)

    def min_degree_in(self, var: str):
        shift = _SHIFTS[ALIASES[var]]
        return min(((key >> shift) & MASK for key in self._d), default=NEG_INF)

    def as_scalar(self) -> ParamScalar:
        if any(key >> SCALAR_BITS for key in self._d):
            raise ValueError(f"{self} depends on s, t or v")
        return ParamScalar._raw(dict(self._d))

    def _spans(self) -> tuple[int, int, int, int, int, int, int]:
        if self._span is None:
            ms = mt = mv = ma = mb = 0
            lo_l, hi_l = 0, 0
            for key in self._d:
                ms = max(ms, key >> S_SHIFT)
                mt = max(mt, (key >> T_SHIFT) & MASK)
                mv = max(mv, (key >> V_SHIFT) & MASK)
                el = ((key >> (2 * FIELD)) & MASK) - (ONE_KEY >> (2 * FIELD))
                lo_l, hi_l = min(lo_l, el), max(hi_l, el)
                ma = max(ma, (key >> FIELD) & MASK)
                mb = max(mb, key & MASK)
            self._span = (ms, mt, mv, lo_l, hi_l, ma, mb)
        return self._span

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "CarrierPoly":
        if not isinstance(other, CarrierPoly):
            try:
                other = CarrierPoly.constant(other)
            except TypeError:
                return NotImplemented
        if len(self._d) < len(other._d):
            small, big = self._d, other._d
        else:
            small, big = other._d, self._d
        d = dict(big)
        for k, c in small.items():
            c2 = d.get(k)
            if c2 is None:
                d[k] = c
            else:
                c2 += c
                if c2:
                    d[k] = c2
                else:
                    del d[k]
        return CarrierPoly._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "CarrierPoly":
        return CarrierPoly._raw({k: -c for k, c in self._d.items()})

    def __sub__(self, other) -> "CarrierPoly":
        if not isinstance(other, CarrierPoly):
            try:
                other = CarrierPoly.constant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CarrierPoly":
        return (-self) + other

    def __mul__(self, other) -> "CarrierPoly":
        if isinstance(other, ParamScalar):
            other = CarrierPoly._raw(other._d)
        elif not isinstance(other, CarrierPoly):
            try:
                c = as_rational(other)
            except TypeError:
                return NotImplemented
            if not c:
                return CarrierPoly._raw({})
            return CarrierPoly._raw({k: v * c for k, v in self._d.items()})
        if not self._d or not other._d:
            return CarrierPoly._raw({})
        self._check_room(other)
        d: dict[int, mpq] = {}
        get = d.get
        for k1, c1 in self._d.items():
            base = k1 - ONE_KEY
            for k2, c2 in other._d.items():
                k = base + k2
                c = get(k)
                d[k] = c1 * c2 if c is None else c + c1 * c2
        return CarrierPoly._raw({k: c for k, c in d.items() if c})

    __rmul__ = __mul__

    def _check_room(self, other: "CarrierPoly") -> None:
        a, b = self._spans(), other._spans()
        if (
            max(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[5] + b[5], a[6] + b[6]) >= EXP_LIMIT
            or a[3] + b[3] <= -EXP_LIMIT
            or a[4] + b[4] >= EXP_LIMIT
        ):
            raise ExponentOverflow("product exponent exceeds the supported range")

    def __pow__(self, n: int) -> "CarrierPoly":
        if not isinstance(n, int) or n < 0:
            if self.monomial_count() == 1 and not any(k >> SCALAR_BITS for k in self._d):
                return CarrierPoly.constant(self.as_scalar() ** n)
            return NotImplemented
        result, base = CarrierPoly.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_t(self, power: int = 1) -> "CarrierPoly":
        step = power << T_SHIFT
        if self._d and self._spans()[1] + power >= EXP_LIMIT:
            raise ExponentOverflow("t exponent exceeds the supported range")
        return CarrierPoly._raw({k + step: c for k, c in self._d.items()})

    def specialize(self, lam0, a0, b0) -> "CarrierPoly":
        """Evaluate every coefficient at rational lam, a, b."""
        out: dict[tuple[int, int, int], object] = {}
        for e, c in self.terms():
            val = c.specialize(lam0, a0, b0)
            if val:
                out[e] = val
        return CarrierPoly(out)

    def substitute_params(self, lam=None, a=None, b=None) -> "CarrierPoly":
        return CarrierPoly({e: c.substitute(lam, a, b) for e, c in self.terms()})

    # -- comparison / display --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, CarrierPoly):
            return self._d == other._d
        try:
            return self._d == CarrierPoly.constant(other)._d
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __str__(self) -> str:
        from .formats import render_poly

        return render_poly(self)

    def __repr__(self) -> str:
        return f"CarrierPoly({str(self)!r})"


S = CarrierPoly.monomial(1, 0, 0)
T = CarrierPoly.monomial(0, 1, 0)
V = CarrierPoly.monomial(0, 0, 1)


def shift_s(f: CarrierPoly, m: int) -> CarrierPoly:
    """Return ``f(s + m, t, v)``."""
    if m == 0 or not f._d:
        return f
    d: dict[int, mpq] = {}
    powers = [1]
    for key, c in f._d.items():
        i = key >> S_SHIFT
        while len(powers) <= i:
            powers.append(powers[-1] * m)
        base = key - (i << S_SHIFT)
        for j in range(i + 1):
            k = base + (j << S_SHIFT)
            d[k] = d.get(k, 0) + c * (comb(i, j) * powers[i - j])
    return CarrierPoly._raw({k: c for k, c in d.items() if c})


def _derivative(f: CarrierPoly, shift: int) -> CarrierPoly:
    unit = 1 << shift
    d = {}
    for key, c in f._d.items():
        e = (key >> shift) & MASK
        if e:
            d[key - unit] = c * e
    return CarrierPoly._raw(d)


def d_ds(f: CarrierPoly) -> CarrierPoly:
    return _derivative(f, S_SHIFT)


def d_dt(f: CarrierPoly) -> CarrierPoly:
    return _derivative(f, T_SHIFT)


def d_dv(f: CarrierPoly) -> CarrierPoly:
    return _derivative(f, V_SHIFT)


def exact_div_t(f: CarrierPoly) -> CarrierPoly:
    """Return ``f / t``; every term must carry at least one factor t."""
    d = {}
    for key, c in f._d.items():
        if not (key >> T_SHIFT) & MASK:
            raise NotDivisibleByT(CarrierPoly._raw({key: c}))
        d[key - T_UNIT] = c
    return CarrierPoly._raw(d)


def degree_in(f: CarrierPoly, var: str):
    """Largest exponent of ``var`` (s, t, v or an alias); NEG_INF for 0."""
    shift = _SHIFTS[ALIASES[var]]
    return max(((key >> shift) & MASK for key in f._d), default=NEG_INF)


def truncate_t(f: CarrierPoly, below: int) -> CarrierPoly:
    """Drop every term whose t-degree is >= ``below`` (reduction mod t^below)."""
    return CarrierPoly._raw({k: c for k, c in f._d.items() if ((k >> T_SHIFT) & MASK) < below})


def shift_v(f: CarrierPoly, c) -> CarrierPoly:
    """Return ``f(s, t, v + c)`` for a scalar ``c``."""
    c = ParamScalar.coerce(c)
    if c.is_zero():
        return f
    out = CarrierPoly()
    cpoly = CarrierPoly.constant(c)
    pows = [CarrierPoly.constant(1)]
    for (i, j, k), coef in f.terms():
        while len(pows) <= k:
            pows.append(pows[-1] * cpoly)
        expansion = CarrierPoly()
        for r in range(k + 1):
            expansion = expansion + CarrierPoly.monomial(i, j, r, coef * comb(k, r)) * pows[k - r]
        out = out + expansion
    return out


def from_key_terms(pairs) -> CarrierPoly:
    """Build from ``[((i, j, k), scalar), ...]``; repeated exponents add up."""
    out = CarrierPoly()
    for e, c in pairs:
        out = out + CarrierPoly.monomial(*e, c=c)
    return out

