"""Normal ordering of ``X_m * L0^i M0^j Y0^k`` into ``sum poly * X'_m``.

Two independent routes: closed formulas (:func:`straighten`) and a
letter-by-letter commutation driven only by :func:`~tsvkit.algebra.bracket_basis`
(:func:`straighten_oracle`).  Both peel the L0 block first, then M0, then Y0.
"""
from __future__ import annotations

from math import comb

from .algebra import FAMILIES, Generator, bracket_basis
from .carrier import CarrierPoly, S, T, V, shift_s

__all__ = ["StraightenedElem", "straighten", "straighten_oracle"]

_ONE = CarrierPoly.constant(1)
_LETTER = {"s": Generator("L", 0), "t": Generator("M", 0), "v": Generator("Y", 0)}
_VAR = {"s": S, "t": T, "v": V}


class StraightenedElem:
    """``sum_F poly_F * F_m`` with the carrier polynomial to the left."""

    __slots__ = ("index", "_coeffs")

    def __init__(self, index: int, coeffs: dict[str, CarrierPoly] | None = None):
        self.index = index
        self._coeffs = {f: c for f, c in (coeffs or {}).items() if c}
        if not set(self._coeffs) <= set(FAMILIES):
            raise ValueError("families must be among L, Y, M")

    @property
    def terms(self) -> list[tuple[CarrierPoly, Generator]]:
        return [(self._coeffs[f], Generator(f, self.index)) for f in FAMILIES if f in self._coeffs]

    def coeff(self, family: str) -> CarrierPoly:
        return self._coeffs.get(family, CarrierPoly())

    def __add__(self, other: "StraightenedElem") -> "StraightenedElem":
        if self.index != other.index:
            raise ValueError("straightened elements carry different indices")
        out = dict(self._coeffs)
        for f, c in other._coeffs.items():
            out[f] = out.get(f, CarrierPoly()) + c
        return StraightenedElem(self.index, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StraightenedElem):
            return NotImplemented
        return self._coeffs == other._coeffs and (self.index == other.index or not self._coeffs)

    def __hash__(self):
        return hash((self.index, frozenset(self._coeffs.items())))

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for poly, gen in self.terms:
            text = str(poly)
            if poly == 1:
                parts.append(str(gen))
            elif poly == -1:
                parts.append(f"-{gen}")
            elif poly.monomial_count() == 1 and len(poly) == 1:
                parts.append(f"{text} * {gen}")
            else:
                parts.append(f"({text}) * {gen}")
        return " + ".join(parts).replace(" + -", " - ")

    def __repr__(self) -> str:
        return f"StraightenedElem({str(self)!r})"


def _mono(i: int, j: int, k: int) -> CarrierPoly:
    return CarrierPoly.monomial(i, j, k) if min(i, j, k) >= 0 else CarrierPoly()


def straighten(gen: Generator, poly: CarrierPoly) -> StraightenedElem:
    """Closed-form straightening, extended to polynomials by linearity.

    >>> str(straighten(Generator("L", 1), V**2))
    'v^2 * L[1] - 2 * v * Y[1] - M[1]'
    """
    m = gen.index
    out = {f: CarrierPoly() for f in FAMILIES}
    for (i, j, k), c in poly.terms():
        left = shift_s(CarrierPoly.monomial(i, 0, 0), m) * c
        if gen.family == "M":
            out["M"] += left * _mono(0, j, k)
        elif gen.family == "Y":
            out["Y"] += left * _mono(0, j, k)
            out["M"] += left * _mono(0, j, k - 1) * (m * k)
        else:
            out["L"] += left * _mono(0, j, k)
            out["Y"] += left * _mono(0, j, k - 1) * (-m * k)
            out["M"] += left * (_mono(0, j, k - 2) * (-comb(k, 2) * m * m) + _mono(0, j - 1, k) * (-3 * m * j))
    return StraightenedElem(m, out)


def straighten_oracle(gen: Generator, poly: CarrierPoly) -> StraightenedElem:
    """Commute the generator past one carrier letter at a time: ``Z x = x Z + [Z, x]``."""
    total = StraightenedElem(gen.index)
    for (i, j, k), c in poly.terms():
        state: dict[Generator, CarrierPoly] = {gen: CarrierPoly.constant(c)}
        for letter in "s" * i + "t" * j + "v" * k:
            nxt: dict[Generator, CarrierPoly] = {}
            for z, coeff in state.items():
                nxt[z] = nxt.get(z, CarrierPoly()) + coeff * _VAR[letter]
                for n, w in bracket_basis(z, _LETTER[letter]):
                    nxt[w] = nxt.get(w, CarrierPoly()) + coeff * n
            state = {z: p for z, p in nxt.items() if p}
        if any(z.index != gen.index for z in state):
            raise AssertionError("commutation with a Cartan letter changed the index")
        total = total + StraightenedElem(gen.index, {z.family: p for z, p in state.items()})
    return total
