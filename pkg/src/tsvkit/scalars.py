"""Exact coefficients in Q[lam, lam^-1, a, b].

Monomials ``lam^i a^j b^k`` are packed into a single Python int so that
multiplying two monomials is one integer addition.  Three 32-bit fields
hold ``(i + 2**31, j, k)``; the lambda field carries an offset because
``i`` may be negative.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterator, Mapping

from gmpy2 import mpq

__all__ = [
    "ParamScalar",
    "ZeroLambda",
    "ExponentOverflow",
    "LAM",
    "A",
    "B",
    "ONE",
    "ZERO",
    "as_rational",
]

FIELD = 32
MASK = (1 << FIELD) - 1
LAM_OFF = 1 << (FIELD - 1)
SCALAR_BITS = 3 * FIELD
SCALAR_MASK = (1 << SCALAR_BITS) - 1
ONE_KEY = LAM_OFF << (2 * FIELD)
EXP_LIMIT = 1 << 30


class ZeroLambda(ValueError):
    """Specialization requested at lam = 0."""


class ExponentOverflow(OverflowError):
    """An exponent left the supported range (|e| < 2**30)."""


def as_rational(x) -> mpq:
    """Coerce int, Fraction, mpq or a ``"p/q"`` string to an exact mpq."""
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)) or type(x).__name__ == "mpq":
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def pack_scalar(el: int, ea: int, eb: int) -> int:
    if not (-EXP_LIMIT < el < EXP_LIMIT and 0 <= ea < EXP_LIMIT and 0 <= eb < EXP_LIMIT):
        raise ExponentOverflow(f"exponent out of range: lam^{el} a^{ea} b^{eb}")
    return ((el + LAM_OFF) << (2 * FIELD)) | (ea << FIELD) | eb


def unpack_scalar(key: int) -> tuple[int, int, int]:
    return ((key >> (2 * FIELD)) & MASK) - LAM_OFF, (key >> FIELD) & MASK, key & MASK


def check_scalar_key(key: int) -> None:
    el, ea, eb = unpack_scalar(key)
    if not (-EXP_LIMIT < el < EXP_LIMIT and ea < EXP_LIMIT and eb < EXP_LIMIT):
        raise ExponentOverflow(f"exponent out of range: lam^{el} a^{ea} b^{eb}")


class ParamScalar:
    """Immutable element of Q[lam^{+-1}, a, b] in canonical sparse form.

    >>> (LAM + ONE) * (LAM - ONE)
    ParamScalar('lam^2 - 1')
    >>> LAM ** -2 * LAM ** 2 == ONE
    True
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        d: dict[int, mpq] = {}
        for (el, ea, eb), c in (terms or {}).items():
            c = as_rational(c)
            if c:
                k = pack_scalar(el, ea, eb)
                d[k] = d.get(k, 0) + c
                if not d[k]:
                    del d[k]
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, d: dict[int, mpq]) -> "ParamScalar":
        obj = object.__new__(cls)
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "ParamScalar":
        c = as_rational(c)
        return cls._raw({ONE_KEY: c} if c else {})

    @classmethod
    def coerce(cls, x) -> "ParamScalar":
        if isinstance(x, ParamScalar):
            return x
        return cls.const(x)

    # -- inspection -------------------------------------------------------
    def terms(self) -> Iterator[tuple[tuple[int, int, int], mpq]]:
        """Yield ``((e_lam, e_a, e_b), coeff)`` in display order."""
        for k in sorted(self._d, reverse=True):
            yield unpack_scalar(k), self._d[k]

    def __len__(self) -> int:
        return len(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and ONE_KEY in self._d)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return self._d.get(ONE_KEY, mpq(0))

    def is_unit(self) -> bool:
        """True for ``c * lam^i`` with c != 0: exactly the invertible elements."""
        if len(self._d) != 1:
            return False
        (k,) = self._d
        return (k & ((1 << (2 * FIELD)) - 1)) == 0

    def inverse(self) -> "ParamScalar":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible in Q[lam^+-1, a, b]")
        ((k, c),) = self._d.items()
        el = unpack_scalar(k)[0]
        return ParamScalar._raw({pack_scalar(-el, 0, 0): 1 / c})

    def degree_in(self, var: str) -> int:
        idx = {"lam": 0, "a": 1, "b": 2}[var]
        return max((unpack_scalar(k)[idx] for k in self._d), default=-1)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            try:
                other = ParamScalar.const(other)
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
        return ParamScalar._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "ParamScalar":
        return ParamScalar._raw({k: -c for k, c in self._d.items()})

    def __sub__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            try:
                other = ParamScalar.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ParamScalar":
        return (-self) + other

    def __mul__(self, other) -> "ParamScalar":
        if not isinstance(other, ParamScalar):
            try:
                c = as_rational(other)
            except TypeError:
                return NotImplemented
            if not c:
                return ZERO
            return ParamScalar._raw({k: v * c for k, v in self._d.items()})
        d: dict[int, mpq] = {}
        for k1, c1 in self._d.items():
            for k2, c2 in other._d.items():
                k = k1 + k2 - ONE_KEY
                c = d.get(k)
                d[k] = c1 * c2 if c is None else c + c1 * c2
        for k in [k for k, c in d.items() if not c]:
            del d[k]
        for k in d:
            check_scalar_key(k)
        return ParamScalar._raw(d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ParamScalar":
        if isinstance(other, ParamScalar):
            return self * other.inverse()
        c = as_rational(other)
        return self * (1 / c)

    def __pow__(self, n: int) -> "ParamScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation -------------------------------------------------------
    def specialize(self, lam0, a0, b0) -> Fraction:
        """Evaluate at ``lam = lam0, a = a0, b = b0`` (lam0 must be nonzero)."""
        lam0, a0, b0 = as_rational(lam0), as_rational(a0), as_rational(b0)
        if not lam0:
            raise ZeroLambda("lambda must be nonzero")
        total = mpq(0)
        for (el, ea, eb), c in self.terms():
            total += c * lam0**el * a0**ea * b0**eb
        return Fraction(int(total.numerator), int(total.denominator))

    def substitute(self, lam=None, a=None, b=None) -> "ParamScalar":
        """Replace any subset of the symbols by scalars (partial specialization)."""
        repl = [lam, a, b]
        out = ZERO
        for exps, c in self.terms():
            keep = [0, 0, 0]
            term = ParamScalar.const(c)
            for i, (e, r) in enumerate(zip(exps, repl)):
                if r is None:
                    keep[i] = e
                else:
                    term = term * ParamScalar.coerce(r) ** e
            out = out + term * ParamScalar._raw({pack_scalar(*keep): mpq(1)})
        return out

    # -- comparison / display --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ParamScalar):
            return self._d == other._d
        try:
            return self._d == ParamScalar.const(other)._d
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __str__(self) -> str:
        from .formats import render_scalar

        return render_scalar(self)

    def __repr__(self) -> str:
        return f"ParamScalar({str(self)!r})"


ZERO = ParamScalar._raw({})
ONE = ParamScalar._raw({ONE_KEY: mpq(1)})
LAM = ParamScalar({(1, 0, 0): 1})
A = ParamScalar({(0, 1, 0): 1})
B = ParamScalar({(0, 0, 1): 1})
