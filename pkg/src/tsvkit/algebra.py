"""The Lie algebra tsv: basis {L_m, Y_m, M_m}, its bracket and a Jacobi sweep.

>>> bracket(Generator("L", 2), Generator("Y", 3))
LieElement('-5 * Y[5]')
>>> bracket(Generator("Y", 1), Generator("Y", -1))
LieElement('2 * M[0]')
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .scalars import ParamScalar, as_rational

__all__ = [
    "FAMILIES",
    "Generator",
    "LieElement",
    "bracket",
    "bracket_basis",
    "basis",
    "jacobi_check",
    "JacobiReport",
    "JACOBI_LIMIT",
]

FAMILIES = ("L", "Y", "M")
_RANK = {f: i for i, f in enumerate(FAMILIES)}
JACOBI_LIMIT = 12


@dataclass(frozen=True)
class Generator:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in _RANK:
            raise ValueError(f"unknown generator family {self.family!r}; expected one of L, Y, M")
        if type(self.index) is not int:
            raise TypeError("generator index must be an int")

    def sort_key(self) -> tuple[int, int]:
        return _RANK[self.family], self.index

    def __str__(self) -> str:
        return f"{self.family}[{self.index}]"

    def __repr__(self) -> str:
        return f"Generator({self.family!r}, {self.index})"


def basis(N: int, families: str = "LYM") -> list[Generator]:
    """All generators with index in [-N, N], family-major."""
    return [Generator(f, m) for f in families for m in range(-N, N + 1)]


def _ordered_bracket(x: Generator, y: Generator) -> list[tuple[int, Generator]]:
    # x.family precedes or equals y.family in L, Y, M order
    m, n = x.index, y.index
    pair = x.family + y.family
    if pair == "LL":
        c, fam = m - n, "L"
    elif pair == "LY":
        c, fam = -(m + n), "Y"
    elif pair == "LM":
        c, fam = -(3 * m + n), "M"
    elif pair == "YY":
        c, fam = m - n, "M"
    else:  # YM, MM
        return []
    return [(c, Generator(fam, m + n))] if c else []


def bracket_basis(x: Generator, y: Generator) -> list[tuple[int, Generator]]:
    """[x, y] on basis elements as a list of (integer coefficient, generator)."""
    if _RANK[x.family] <= _RANK[y.family]:
        return _ordered_bracket(x, y)
    return [(-c, g) for c, g in _ordered_bracket(y, x)]


@dataclass(frozen=True)
class LieElement:
    """Finite combination of basis generators with ParamScalar coefficients."""

    _terms: Mapping[Generator, ParamScalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, c in self._terms.items():
            c = ParamScalar.coerce(c)
            if c:
                clean[g] = c
        object.__setattr__(self, "_terms", dict(sorted(clean.items(), key=lambda gc: gc[0].sort_key())))

    @classmethod
    def of(cls, x) -> "LieElement":
        if isinstance(x, LieElement):
            return x
        if isinstance(x, Generator):
            return cls({x: 1})
        raise TypeError(f"cannot make a LieElement from {x!r}")

    def terms(self) -> Iterator[tuple[Generator, ParamScalar]]:
        return iter(self._terms.items())

    def coeff(self, g: Generator) -> ParamScalar:
        return self._terms.get(g, ParamScalar())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other) -> "LieElement":
        other = LieElement.of(other)
        out = dict(self._terms)
        for g, c in other._terms.items():
            out[g] = out.get(g, ParamScalar()) + c
        return LieElement(out)

    def __neg__(self) -> "LieElement":
        return LieElement({g: -c for g, c in self._terms.items()})

    def __sub__(self, other) -> "LieElement":
        return self + (-LieElement.of(other))

    def __mul__(self, scalar) -> "LieElement":
        if not isinstance(scalar, ParamScalar):
            try:
                scalar = ParamScalar.const(as_rational(scalar))
            except TypeError:
                return NotImplemented
        return LieElement({g: c * scalar for g, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Generator):
            other = LieElement.of(other)
        if not isinstance(other, LieElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for g, c in self._terms.items():
            text = str(c)
            if c == 1:
                parts.append(str(g))
            elif c == -1:
                parts.append(f"-{g}")
            elif len(c) > 1:
                parts.append(f"({text}) * {g}")
            else:
                parts.append(f"{text} * {g}")
        return " + ".join(parts).replace(" + -", " - ")

    def __repr__(self) -> str:
        return f"LieElement({str(self)!r})"


def bracket(x, y) -> LieElement:
    """Bilinear bracket of generators or LieElements."""
    x, y = LieElement.of(x), LieElement.of(y)
    out: dict[Generator, ParamScalar] = {}
    for gx, cx in x.terms():
        for gy, cy in y.terms():
            coeff = cx * cy
            for c, g in bracket_basis(gx, gy):
                out[g] = out.get(g, ParamScalar()) + coeff * c
    return LieElement(out)


@dataclass
class JacobiReport:
    N: int
    checked: int
    failures: list[tuple[Generator, Generator, Generator, dict[Generator, int]]]

    @property
    def passed(self) -> bool:
        return not self.failures


def _bracket_vec(x: Generator, vec: dict[Generator, int]) -> dict[Generator, int]:
    out: dict[Generator, int] = {}
    for g, c in vec.items():
        for c2, h in bracket_basis(x, g):
            out[h] = out.get(h, 0) + c * c2
    return out


def jacobi_check(N: int, limit: int = JACOBI_LIMIT) -> JacobiReport:
    """Cyclic sum [x,[y,z]] + [y,[z,x]] + [z,[x,y]] over all basis triples with |index| <= N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if N > limit:
        raise ValueError(f"N = {N} exceeds the configured limit {limit}")
    gens = basis(N)
    inner = {(y, z): dict((g, c) for c, g in bracket_basis(y, z)) for y in gens for z in gens}
    failures = []
    checked = 0
    for x, y, z in product(gens, repeat=3):
        total: dict[Generator, int] = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for g, k in _bracket_vec(a, inner[(b, c)]).items():
                total[g] = total.get(g, 0) + k
        residual = {g: k for g, k in total.items() if k}
        if residual:
            failures.append((x, y, z, residual))
        checked += 1
    return JacobiReport(N, checked, failures)
