from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prismcheck.rambounds import (
    LogValue,
    alpha_beta,
    assemble_final_bound,
    caruso_bound,
    caruso_liu_bound,
    check_invariants,
    compare_table,
    different_bound_main,
    different_Ks,
    example_diff_cyclotomic,
    floor_log_p,
    fontaine_abrashkin_bound,
    hattori_bound,
    kummer_constants,
    mu_bound_main,
    named_field,
    simplified_bounds,
    variant_mu_bound,
)

primes = st.sampled_from([3, 5, 7, 11, 13])
GRID = [(p, e, i) for p in (3, 5, 7) for e in range(1, 31) for i in range(1, 31)]


def floor_log_oracle(q: F, p: int) -> int:
    """Scan t over a window with exact Fraction powers."""
    for t in range(-80, 80):
        if F(p) ** t <= q < F(p) ** (t + 1):
            return t
    raise AssertionError("window too small")


# -- floor_log_p -------------------------------------------------------------------


@pytest.mark.parametrize("q,p,t", [(F(3, 2), 3, 0), (9, 3, 2), (F(15, 2), 3, 1),
                                   (F(1, 3), 3, -1), (F(26, 27), 3, -1), (1, 5, 0)])
def test_floor_log_examples(q, p, t):
    assert floor_log_p(q, p) == t


@given(st.fractions(min_value=F(1, 10 ** 6), max_value=10 ** 9), primes)
def test_floor_log_matches_oracle(q, p):
    assert floor_log_p(q, p) == floor_log_oracle(q, p)


def test_floor_log_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_log_p(0, 3)


# -- components and main bounds ------------------------------------------------------


def test_alpha_beta_examples():
    c = alpha_beta(3, 1, 1)
    assert (c.alpha, c.beta, c.a, c.b) == (1, F(1, 6), F(3, 2), F(1, 2))
    c = alpha_beta(3, 2, 5)
    assert (c.alpha, c.beta) == (2, F(14, 9))
    assert alpha_beta(5, 1, 2).beta == F(3, 10)
    assert alpha_beta(3, 20, 7).max_label == "(i-1)e/(p-1)"


def test_main_bound_examples():
    assert mu_bound_main(3, 1, 1) == F(5, 2)
    assert mu_bound_main(3, 2, 5) == F(59, 9)
    for p in (5, 7, 11):
        for i in range(2, p - 1):
            assert mu_bound_main(p, 1, i) == 2 - F(1, p) + F(i, p - 1)


def test_different_bound_examples():
    assert different_bound_main(3, 1, 1) == F(13, 6)
    assert different_bound_main(3, 2, 5) == F(59, 9)
    assert different_bound_main(5, 1, 2) == 2 + F(3, 10)


def test_input_guards():
    for args in [(2, 1, 1), (9, 1, 1), (3, 0, 1), (3, 1, 0)]:
        with pytest.raises(ValueError):
            mu_bound_main(*args)


# -- simplified bounds -----------------------------------------------------------------------


def test_simplified_examples():
    cases = dict((c, v) for c, v, _ in simplified_bounds(3, 2, 1))
    assert cases["i=1"] == 4 and 4 >= mu_bound_main(3, 2, 1)
    cases = dict((c, (v, d)) for c, v, d in simplified_bounds(3, 2, 5))
    assert cases["e<=p"] == (7, True)
    (case, v, dom), = simplified_bounds(3, 7, 2)
    assert case == "e>p" and v == 1 + 7 * 2 + 3


def test_simplified_dominates_on_guard_domain():
    for p, e, i in GRID:
        for case, value, dom in simplified_bounds(p, e, i):
            if case == "e>p" and e > p * (p - 1):
                continue
            assert dom, (p, e, i, case, value)


def test_simplified_e_gt_p_counterexample():
    # beyond e = p(p-1) the additive p no longer covers e/(p-1)
    (_, value, dom), = simplified_bounds(3, 7, 2)
    assert value == 18 and mu_bound_main(3, 7, 2) == F(37, 2) and not dom
    assert variant_mu_bound(3, 7, 2) >= mu_bound_main(3, 7, 2)


# -- Table rows ------------------------------------------------------------------------------


def test_caruso_liu_examples():
    assert caruso_liu_bound(3, 1, 1).value == F(5, 2)
    assert caruso_liu_bound(3, 2, 5).value == F(59, 9)
    cl = caruso_liu_bound(3, 20, 7)
    assert alpha_beta(3, 20, 7).alpha == 4 and cl.components.alpha == 3
    assert cl.value < mu_bound_main(3, 20, 7)


def test_caruso_examples():
    r = caruso_bound(3, 1, 1, 0, 1)
    assert r.value.is_rational and r.value.rational == F(7, 2)
    r = caruso_bound(3, 2, 3, 0, 1)   # ip = 9 = 3^2
    assert r.value.is_rational and r.value.rational == 1 + 2 * (2 + 1) + 1
    r = caruso_bound(5, 3, 2, 0, 1)
    assert (r.value.rational, r.value.coeff, r.value.arg) == (1 + 3 + F(3, 4), 3, 10)
    assert not caruso_bound(3, 1, 1).applicable


@given(primes, st.integers(1, 40), st.integers(1, 40), st.integers(0, 50), st.integers(1, 4))
def test_caruso_decimal_matches_float_oracle(p, e, i, c0, s0):
    val = caruso_bound(p, e, i, c0, s0).value
    oracle = 1 + c0 + e * s0 + e / (p - 1) + e * math.log(i * p) / math.log(p)
    assert abs(float(val.decimal(50)) - oracle) < 1e-9 * oracle


@given(st.fractions(min_value=-50, max_value=50, max_denominator=30),
       st.fractions(min_value=F(1, 10), max_value=20, max_denominator=30),
       st.integers(2, 500), primes, st.fractions(min_value=-200, max_value=200,
                                                 max_denominator=30))
def test_logvalue_compare_matches_decimal(r, c, n, p, q):
    lv = LogValue(r, c, n, p)
    d = lv.decimal(60)
    if abs(float(d) - float(q)) > 1e-12:
        assert (lv > q) == (float(d) > float(q))
        assert (lv < q) == (float(d) < float(q))


def test_logvalue_exact_tie():
    lv = LogValue(1, 2, 9, 3)          # collapses: 1 + 2*2
    assert lv.compare(5) == 0
    lv = LogValue(0, 1, 6, 3)          # log_3 6 vs 3/2: 6^2 = 36 > 27
    assert lv > F(3, 2) and lv < F(17, 10)


def test_hattori_examples():
    assert hattori_bound(5, 1, 1).value == F(9, 4)
    assert hattori_bound(5, 1, 3).value == F(51, 20)
    r = hattori_bound(3, 2, 1)
    assert not r.applicable and r.reason == "requires ie < p-1"


def test_fa_examples():
    assert fontaine_abrashkin_bound(5, 2).value == F(3, 2)
    assert fontaine_abrashkin_bound(3, 1).value == F(3, 2)
    assert not fontaine_abrashkin_bound(3, 2).applicable


def test_compare_table_rows():
    rows = compare_table(5, 1, 1)
    assert [r.method for r in rows] == ["Main", "CarusoLiu", "Caruso", "Hattori",
                                        "FontaineAbrashkin"]
    assert rows[0].value == rows[1].value == rows[3].value == F(9, 4)
    assert rows[4].value == F(5, 4) < rows[0].value
    rows = compare_table(3, 2, 5)
    assert not rows[3].applicable and not rows[4].applicable
    rows = compare_table(3, 6, 2, (4, 2))
    assert rows[2].applicable and rows[2].value.rational == 1 + 4 + 12 + 3


# -- the different and the proof chain ------------------------------------------------------


def different_oracle(p: int, e: int, s: int) -> F:
    """v_K(f'(pi_s)) for f = x^{p^s} - pi: v_K(p^s) + (p^s - 1) v_K(pi_s)."""
    if s == 0:
        return F(0)
    return e * s + F(p ** s - 1, p ** s)


@pytest.mark.parametrize("p,e,s,val", [(3, 1, 0, 0), (3, 1, 1, F(5, 3)), (3, 2, 2, F(44, 9))])
def test_different_Ks_examples(p, e, s, val):
    assert different_Ks(p, e, s) == val


@given(primes, st.integers(1, 30), st.integers(0, 5))
def test_different_Ks_matches_oracle(p, e, s):
    assert different_Ks(p, e, s) == different_oracle(p, e, s)


def test_assemble_examples():
    val, trace = assemble_final_bound(3, 1, 1)
    assert val == F(5, 2)
    assert (trace["s"], trace["m"], trace["mu_N"]) == (1, F(1, 2), 1 + 1 + F(1, 2))
    assert trace["phi_estimate"] == 1 + 1 + (F(3, 2) - 1) / 3
    assert assemble_final_bound(3, 2, 5)[0] == F(59, 9)
    assert assemble_final_bound(5, 1, 2)[0] == mu_bound_main(5, 1, 2)


def test_different_bound_assembles():
    # v_K(D_{L_s/K}) < v_K(D_{K_s/K}) + a/p^s equals the closed form at s = alpha
    for p, e, i in GRID[::7]:
        c = alpha_beta(p, e, i)
        assert different_Ks(p, e, c.alpha) + c.a / p ** c.alpha == different_bound_main(p, e, i)


# -- named fields and examples ---------------------------------------------------------------


def test_named_fields():
    f = named_field("cyclotomic:3:2")
    assert (f.e, f.c0, f.s0) == (6, 4, 2)
    assert named_field("cyclotomic:3:3").c0 == 28
    assert (named_field("qp").e, named_field("qp").c0) == (1, 0)
    k = named_field("kummer:5:2")
    assert (k.e, k.c0, k.s0) == (25, 50, 1)
    for bad in ("cyclo:3:2", "kummer:3", "cyclotomic:3:x", "cyclotomic:3:0"):
        with pytest.raises(ValueError):
            named_field(bad)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 3), (7, 1)])
def test_kummer_constants(p, n):
    k = kummer_constants(p, n)
    assert k.c0 == n * p ** n == n * k.e


@pytest.mark.parametrize("p,n,i,threshold,approx", [
    (3, 2, 2, 6, 13.7856), (3, 3, 2, 36, 57.3567), (5, 2, 3, 20, 49.6521)])
def test_example_differences(p, n, i, threshold, approx):
    diff, th, exceeds = example_diff_cyclotomic(p, n, i)
    assert th == threshold and exceeds
    assert abs(float(diff) - approx) < 1e-3


def test_example_difference_guards():
    with pytest.raises(ValueError):
        example_diff_cyclotomic(3, 1, 2)


# -- invariants ----------------------------------------------------------------------------------


@given(primes, st.integers(1, 60), st.integers(1, 60))
def test_invariants_hold(p, e, i):
    rep = check_invariants(p, e, i)
    assert rep.passed, rep.as_dict()


@given(primes, st.integers(1, 60), st.integers(2, 60))
def test_beta_footnote_bound(p, e, i):
    assert alpha_beta(p, e, i).beta < min(e, 2 * p)


def test_bound_rows_serialize():
    row = compare_table(3, 6, 2, (4, 2))[2].as_dict()
    assert row["value_exact"] == "20/1"
    assert row["log_term"] == {"coeff": "6/1", "base": 3, "arg": 6}
    assert row["value_decimal"].startswith("29.78557852142874462259716")
