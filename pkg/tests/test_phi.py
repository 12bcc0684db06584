import random

import pytest
import sympy as sp
from conftest import polys, t_polys
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy_oracle import SympyPhi, a, b, lam, residual, t, to_sympy, v

from tsvkit.algebra import Generator, basis
from tsvkit.carrier import CarrierPoly, NotDivisibleByT, S, T, V
from tsvkit.formats import parse_poly as P
from tsvkit.phi import (
    MUTATIONS,
    ActionWindow,
    IndexOutsideWindow,
    InvalidParams,
    PhiParams,
    TDependentInput,
    WindowError,
    act,
    act_generic,
    act_L,
    act_M,
    act_quotient,
    act_Y,
    closing_gamma_series,
    d_term,
    filtration_check,
    induced_quotient_action,
    monomial_grid,
    submodule_check,
    verify_module,
    verify_window,
    window_from_params,
)
from tsvkit.sampling import random_params
from tsvkit.scalars import A, B, LAM

SYM0 = PhiParams.make(tau=[0])


@st.composite
def params(draw, closing=False):
    q = draw(st.integers(0, 2))
    tau = [draw(t_polys(2)) for _ in range(q + 1)]
    if closing:
        return PhiParams.make(tau=tau, gamma_series=closing_gamma_series(A, B, draw(t_polys(2))))
    gamma = draw(st.dictionaries(st.integers(-3, 3).filter(bool), t_polys(2), max_size=2))
    return PhiParams.make(tau=tau, gamma=gamma)


def oracle_of(p: PhiParams) -> SympyPhi:
    return SympyPhi([to_sympy(x) for x in p.tau], lambda m: to_sympy(p.gamma_at(m)))


# -- direct actions ------------------------------------------------------------

def test_m_action_examples():
    assert act_M(SYM0, 1, S) == P("lam*t*(s+1)")
    conc = PhiParams.make(lam=2, a=0, b=0, tau=[0])
    assert act_M(conc, -1, CarrierPoly.constant(1)) == P("t/2")


def test_y_action_examples():
    assert act_Y(PhiParams.make(tau=["t", 0]), 1, P("1")) == P("lam*(t + v + a*t + b)")
    assert act_Y(PhiParams.make(tau=[0, "t"]), 1, V) == P("lam*((t*v + v + a*t + b)*v + t)")


def test_l_action_small_cases_against_oracle():
    # tau = 0, gamma = 0 still leaves the 3amv contribution of D_m
    want = SympyPhi([0], lambda m: 0).L(1, v)
    assert to_sympy(act_L(SYM0, 1, V)) == want
    assert want == sp.expand(lam * (sp.Symbol("s") * v - (v + a * t + b) + 3 * a * v**2))
    p = PhiParams.make(tau=["t"], gamma={1: "t^2"})
    want = SympyPhi([t], lambda m: t**2 if m == 1 else 0).L(1, sp.Integer(1))
    assert to_sympy(act_L(p, 1, P("1"))) == want


@given(params(), polys(max_terms=3, max_deg=2), st.integers(-3, 3), st.sampled_from("LYM"))
def test_actions_match_sympy_transcription(p, f, m, fam):
    assert to_sympy(act(p, Generator(fam, m), f)) == oracle_of(p).act(fam, m, to_sympy(f))


@given(params(), polys())
def test_freeness_anchor(p, f):
    assert act_L(p, 0, f) == S * f
    assert act_M(p, 0, f) == T * f
    assert act_Y(p, 0, f) == V * f


def test_d_term_is_l_on_one_minus_s():
    p = random_params(random.Random(3))
    for m in range(-3, 4):
        assert d_term(p, m) == act_L(p, m, P("1")) * p.lam ** (-m) - S


def test_invalid_gamma_breaks_division():
    p = PhiParams.make(tau=["t"], gamma={1: "1 + t"})
    with pytest.raises(InvalidParams, match=r"gamma in t\*Q\[t\]"):
        p.validate()
    with pytest.raises(NotDivisibleByT):
        act_L(p, 1, P("1"))


def test_params_construction():
    with pytest.raises(InvalidParams):
        PhiParams.make(lam=A)
    with pytest.raises(InvalidParams):
        PhiParams.make(tau=["s*t"])
    assert PhiParams.make(tau=["t"], q=2).q == 2
    p = PhiParams.make(tau=["t", 0, 0])
    assert p.canonical().q == 0 and p.canonical().tau == (T,)


def test_specialize_matches_concrete_construction():
    p = PhiParams.make(tau=["a*t", "t^2"], gamma={2: "b*t"})
    q = PhiParams.make(lam=3, a=2, b=-1, tau=["2*t", "t^2"], gamma={2: "-t"})
    assert p.specialize(3, 2, -1) == q


# -- generic engine ------------------------------------------------------------

def test_generic_engine_examples():
    p = random_params(random.Random(5))
    w = window_from_params(p, 3)
    assert act_generic(w, Generator("M", 1), S**2) == P("lam*t*(s+1)^2")
    for m in range(-3, 4):
        g, a_m, p_m = w.entries[m]
        assert act_generic(w, Generator("L", m), T) == a_m * (-3 * m) + T * g
        assert act_generic(w, Generator("Y", m), V) == a_m * m + V * p_m
    with pytest.raises(IndexOutsideWindow):
        act_generic(w, Generator("L", 4), T)


@given(params(), polys(max_deg=2), st.sampled_from(basis(2)))
def test_generic_engine_coherence(p, f, gen):
    assert act_generic(window_from_params(p, 2), gen, f) == act(p, gen, f)


def test_window_invariants():
    w = window_from_params(SYM0, 1)
    with pytest.raises(WindowError):
        ActionWindow(1, {0: (S, T, V), 1: w.entries[1]})
    with pytest.raises(WindowError):
        ActionWindow(0, {0: (S, T, V * 2)})


# -- bracket compatibility ------------------------------------------------------

def test_closing_family_is_a_module_symbolically():
    rng = random.Random(11)
    for _ in range(2):
        p = random_params(rng, closing=True)
        rep = verify_module(p, N=3, D=2)
        assert rep.passed, rep.failures[:1]


@settings(max_examples=12)
@given(params(closing=True))
def test_closing_family_small_window(p):
    assert verify_module(p, N=2, D=1).passed


@settings(max_examples=12)
@given(params())
def test_only_ll_family_can_fail(p):
    rep = verify_module(p, N=2, D=1)
    assert set(rep.families()) <= {"[L,L]"}


def test_ll_defect_matches_independent_computation():
    rep = verify_module(SYM0, N=2, D=0)
    fail = next(f for f in rep.failures if (f.x, f.z) == (Generator("L", -2), Generator("L", -1)))
    want = residual(SympyPhi([0], lambda m: 0), "L", -2, "L", -1, sp.Integer(1))
    assert sp.expand(to_sympy(fail.residual) - want) == 0
    assert sp.simplify(want - 6 * a * (2 * a * t - b) / lam**3) == 0


def test_defect_vanishes_when_a_is_zero():
    p = PhiParams.make(a=0, tau=["t", "t^2"], gamma={1: "t", -2: "t^3"})
    assert verify_module(p, N=2, D=1).families() in ([], ["[L,L]"])
    p0 = PhiParams.make(a=0, tau=["t", "t^2"], gamma_series={1: "t - t^2"})
    assert verify_module(p0, N=3, D=1).passed


@pytest.mark.parametrize("mutation", MUTATIONS)
def test_mutations_are_killed(mutation):
    p = random_params(random.Random(2), closing=True)
    rep = verify_module(p, N=2, D=1, mutation=mutation)
    assert rep.failures and rep.families()


def test_drop_dt_breaks_lm():
    p = random_params(random.Random(4), closing=True)
    assert "[L,M]" in verify_module(p, N=2, D=1, mutation="drop-dt").families()


def test_workers_give_identical_reports():
    p = random_params(random.Random(8))
    one = verify_module(p, N=2, D=1, workers=1)
    two = verify_module(p, N=2, D=1, workers=2)
    assert (one.checked, one.failures) == (two.checked, two.failures)


def test_window_sweep_agrees_with_parameter_sweep():
    p = random_params(random.Random(9), closing=True)
    assert verify_window(window_from_params(p, 2), D=1).passed
    # derivative-only mutations leave the values on 1 untouched
    assert window_from_params(p, 2, mutation="flip-sign-YY") == window_from_params(p, 2)
    bad = window_from_params(p, 2, mutation="perturb-gamma")
    assert not verify_window(bad, D=1).passed


# -- submodules and quotients -------------------------------------------------------

@given(params(), st.integers(0, 3))
def test_t_power_submodules(p, k):
    assert submodule_check(p, k, N=2, D=1).passed


@given(params(), st.integers(0, 3), polys(max_deg=2, variables="sv"), st.sampled_from(basis(3)))
def test_quotient_equals_induced_action(p, k, f, gen):
    assert act_quotient(p, k, gen, f) == induced_quotient_action(p, k, gen, f)


def test_quotient_examples():
    p = random_params(random.Random(1))
    f = P("s*v + 2")
    assert act_quotient(p, 2, Generator("M", 5), f) == CarrierPoly()
    assert act_quotient(p, 2, Generator("Y", 0), f) == V * f
    with pytest.raises(TDependentInput):
        act_quotient(p, 1, Generator("L", 1), T)


@given(params(), st.integers(0, 3), st.integers(0, 2))
def test_filtration(p, k, j):
    assert filtration_check(p, k, j, N=2, D=1).passed


def test_filtration_y_outputs_carry_the_factor():
    p = random_params(random.Random(6))
    vb = V + p.b
    out = act_quotient(p, 1, Generator("Y", 2), vb * S)
    assert out == vb * vb * (S + 2) * p.lam**2


def test_monomial_grid():
    assert len(monomial_grid(2)) == 27
    assert len(monomial_grid(2, "sv")) == 9
