from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from tsvkit.carrier import CarrierPoly
from tsvkit.scalars import ParamScalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)
nonzero_rationals = rationals.filter(bool)


@st.composite
def scalars(draw, max_terms: int = 3) -> ParamScalar:
    terms = draw(
        st.dictionaries(
            st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2)), rationals, max_size=max_terms
        )
    )
    return ParamScalar(terms)


@st.composite
def polys(draw, max_terms: int = 4, max_deg: int = 3, variables: str = "stv") -> CarrierPoly:
    def exp(var):
        return st.integers(0, max_deg) if var in variables else st.just(0)

    terms = draw(
        st.dictionaries(st.tuples(exp("s"), exp("t"), exp("v")), scalars(max_terms=2), max_size=max_terms)
    )
    return CarrierPoly(terms)


@st.composite
def t_polys(draw, max_deg: int = 3) -> CarrierPoly:
    """Elements of t*Q[t]."""
    coeffs = draw(st.lists(rationals, min_size=max_deg, max_size=max_deg))
    return CarrierPoly({(0, e + 1, 0): c for e, c in enumerate(coeffs)})


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


__all__ = ["rationals", "nonzero_rationals", "scalars", "polys", "t_polys", "Fraction"]
