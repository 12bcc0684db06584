import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsvkit.algebra import Generator, LieElement, basis, bracket, jacobi_check
from tsvkit.scalars import LAM

gens = st.builds(Generator, st.sampled_from("LYM"), st.integers(-6, 6))
elements = st.lists(st.tuples(gens, st.integers(-3, 3)), max_size=4).map(
    lambda pairs: sum((LieElement({g: c}) for g, c in pairs), LieElement())
)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (("L", 2), ("Y", 3), {("Y", 5): -5}),
        (("L", 1), ("M", 1), {("M", 2): -4}),
        (("Y", 1), ("Y", -1), {("M", 0): 2}),
        (("M", 3), ("M", -3), {}),
        (("L", 3), ("L", -1), {("L", 2): 4}),
        (("Y", 2), ("M", 5), {}),
    ],
)
def test_bracket_table(x, y, expected):
    want = LieElement({Generator(*g): c for g, c in expected.items()})
    assert bracket(Generator(*x), Generator(*y)) == want


@given(elements, elements)
def test_antisymmetry(x, y):
    assert bracket(x, y) + bracket(y, x) == LieElement()


@given(elements, elements, elements)
def test_jacobi_on_combinations(x, y, z):
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert total.is_zero()


def test_bilinear_in_scalars():
    x, y = Generator("L", 1), Generator("Y", 2)
    assert bracket(LieElement({x: LAM}), y) == bracket(x, y) * LAM


def test_ym_span_is_an_ideal():
    for x in basis(4):
        for y in basis(4, "YM"):
            assert all(g.family in "YM" for g, _ in bracket(x, y).terms())


def test_jacobi_sweep_counts():
    assert jacobi_check(2).checked == 15**3
    rep = jacobi_check(5)
    assert rep.passed and rep.checked == 33**3


def test_jacobi_limit():
    with pytest.raises(ValueError):
        jacobi_check(50)


def test_generator_validation():
    with pytest.raises(ValueError):
        Generator("X", 1)
    assert str(Generator("Y", -2)) == "Y[-2]"
