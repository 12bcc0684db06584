import random
from fractions import Fraction

import pytest

from tsvkit.carrier import CarrierPoly, S, T, V, degree_in
from tsvkit.classify import (
    GShapeMismatch,
    PShapeMismatch,
    check_shapes,
    extract_lambda,
    fit_g,
    fit_p,
    iso_check,
    recognize,
)
from tsvkit.phi import ActionWindow, PhiParams, window_from_params
from tsvkit.sampling import random_params, single_mutations
from tsvkit.scalars import LAM


@pytest.fixture(scope="module")
def good():
    p = random_params(random.Random(21), closing=True)
    return p, window_from_params(p, 3)


def affine_v_window(N: int = 3, m0: int = 1) -> ActionWindow:
    """p_n = ((m0 - n)/m0) lam^n v + alpha_n(t) with a_n = lam^n t, g_n = lam^n s."""
    entries = {}
    for n in range(-N, N + 1):
        ln = LAM**n
        alpha = T * ln * n
        entries[n] = (S * ln, T * ln, V * ln * Fraction(m0 - n, m0) + alpha)
    return ActionWindow(N, entries)


def test_valid_window_passes_all_shape_stages(good):
    _, w = good
    stages = check_shapes(w)
    assert [s.tag for s in stages] == ["L3.2", "L3.3", "L3.4", "L3.5", "L3.6"]
    assert all(s.passed for s in stages)
    assert all(degree_in(a, "t") == 1 for _, a, _ in w.entries.values())


def test_planted_shape_violations(good):
    _, w = good
    last = check_shapes(w.replace(3, a=0))[-1]
    assert (last.tag, last.passed) == ("L3.2", False) and "m=3" in last.witness
    last = check_shapes(w.replace(1, a=T + T**2))[-1]
    assert (last.tag, last.passed) == ("L3.6", False)
    last = check_shapes(w.replace(2, a=T * S))[-1]
    assert (last.tag, last.passed) == ("L3.3", False)
    last = check_shapes(w.replace(-1, p=w.entries[-1][2] + S))[-1]
    assert (last.tag, last.passed) == ("L3.4", False)
    last = check_shapes(w.replace(2, g=w.entries[2][0] + S * S))[-1]
    assert (last.tag, last.passed) == ("L3.5", False)


def test_fit_p_recovers_parameters(good):
    p, w = good
    fit = fit_p(w, extract_lambda(w))
    assert (fit.a, fit.b) == (p.a, p.b)
    assert fit.tau == p.canonical().tau


def test_fit_p_rejections(good):
    _, w = good
    with pytest.raises(PShapeMismatch) as info:
        fit_p(w.replace(2, p=w.entries[2][2] + V**2 * LAM**2), LAM)
    assert info.value.m == 2
    # would-be window whose T_0 carries a constant term
    bad_t = CarrierPoly.constant(1) + T
    entries = {m: (g, a, (bad_t * m + V + T * m * m + 3) * LAM**m if m else p_) for m, (g, a, p_) in w.entries.items()}
    with pytest.raises(PShapeMismatch, match=r"T_i in t\*Q\[t\]"):
        fit_p(ActionWindow(3, entries), LAM)
    small = window_from_params(PhiParams.make(tau=["t"]), 1)
    with pytest.raises(PShapeMismatch, match="minimum 2"):
        fit_p(small, LAM)


def test_fit_g_recovers_gamma():
    p = PhiParams.make(tau=["t"], gamma={2: "t^3"})
    w = window_from_params(p, 3)
    fit = fit_p(w, LAM)
    rs = fit_g(w, LAM, fit.a, fit.b, fit.tau)
    assert rs[2] == T**3 and rs[0] == CarrierPoly()
    assert all(not r for m, r in rs.items() if m != 2)
    with pytest.raises(GShapeMismatch, match="depends on s or v"):
        fit_g(w.replace(1, g=w.entries[1][0] + V * LAM), LAM, fit.a, fit.b, fit.tau)


@pytest.mark.parametrize("seed, symbolic", [(1, True), (2, False), (3, True), (4, False)])
def test_round_trip_for_modules(seed, symbolic):
    p = random_params(random.Random(seed), symbolic=symbolic, closing=True)
    rep = recognize(window_from_params(p, 3))
    assert rep.passed, rep.render_text()
    assert rep.fitted == p.restricted(3).canonical()
    assert [s.tag for s in rep.stages][-3:] == ["L3.9", "L3.10", "verify"]


def test_non_module_window_is_rejected_at_verification():
    p = random_params(random.Random(5))
    rep = recognize(window_from_params(p, 3))
    assert not rep.passed and rep.fitted is None
    assert rep.failed_stage().tag == "verify" and "[L,L]" in rep.failed_stage().witness


def test_inconsistent_p_is_caught(good):
    p, w = good
    # p_3 still of closed form, but with a different b: only the full fit sees it
    tweaked = w.replace(3, p=w.entries[3][2] + LAM**3)
    rep = recognize(tweaked)
    assert not rep.passed and rep.failed_stage().tag == "L3.9"


def test_planted_gamma_passes_fits_but_fails_verification(good):
    _, w = good
    tweaked = w.replace(3, g=w.entries[3][0] + LAM**3 * T)
    rep = recognize(tweaked)
    assert [s.tag for s in rep.stages if s.passed][-1] == "L3.10"
    assert rep.failed_stage().tag == "verify" and rep.fitted is None


def test_affine_v_window_is_rejected():
    rep = recognize(affine_v_window())
    assert not rep.passed
    assert rep.failed_stage().tag in ("L3.9", "verify")


def test_iso_check_witnesses(good):
    p, _ = good
    assert iso_check(p, p)
    rng = random.Random(0)
    for name, mutated in single_mutations(p, rng):
        res = iso_check(p, mutated)
        assert not res and res.witness == name
    padded = PhiParams.make(lam=p.lam, a=p.a, b=p.b, tau=list(p.tau) + [0], gamma_series=dict(p.gamma_series))
    res = iso_check(p, padded)
    assert res.isomorphic and not res.raw_equal and "trailing" in res.note


def test_gamma_witness_names_the_index():
    x = PhiParams.make(tau=["t"], gamma={5: "t"})
    y = PhiParams.make(tau=["t"], gamma={5: "2*t"})
    assert iso_check(x, y).witness == "gamma[5]"


def test_report_documents(good):
    _, w = good
    rep = recognize(w)
    doc = rep.to_doc()
    assert doc["recognized"] and doc["fitted"]["schema"] == 1
    assert rep.render_text().splitlines()[-1] == "result: recognized"
