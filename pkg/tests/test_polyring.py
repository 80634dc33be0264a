from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prismcheck.polyring import (
    ZZ,
    CoeffDomain,
    DomainMismatchError,
    MPoly,
    NotDivisibleByPError,
    PolyError,
    PolyParseError,
    divide_by_p,
    exact_divide,
    parse_poly,
    poly_arith,
    reduce_mod_pn,
    substitute,
    u_valuation,
)

from strategies import nonzero_polys, polys

u, w = MPoly.var("u"), MPoly.var("w")


def P(text, domain=ZZ):
    return parse_poly(text, domain)


# -- domains and text format ----------------------------------------------------


def test_domain_rejects_p2_and_bad_precision():
    with pytest.raises(PolyError, match="odd prime"):
        CoeffDomain(2, 1)
    with pytest.raises(PolyError):
        CoeffDomain(3, 0)
    assert str(CoeffDomain(3, 2)) == "Z/3^2"
    assert str(ZZ) == "ZZ"


@pytest.mark.parametrize("text", ["u^4 - 3*u + 9*w^2", "x1*x2 - 1", "-u", "0", "7"])
def test_format_parse_round_trip(text):
    assert str(P(text)) == text
    assert P(str(P(text))) == P(text)


def test_parse_precedence_and_whitespace():
    assert P(" 2*u ^ 2 ") == 2 * u ** 2
    assert P("u**3") == u ** 3
    assert P("-(u+w)^2") == -(u + w) ** 2


@pytest.mark.parametrize("bad", ["u^", "u + * w", "3u^(-1)", "(u+1", "u^-1"])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        P(bad)


def test_canonical_order_u_before_w_before_aux():
    f = P("x1 + w + u")
    assert f.gens[:2] == ("u", "w")
    assert str(f) == "u + w + x1"


# -- poly_arith ---------------------------------------------------------------------


def test_difference_of_squares():
    assert poly_arith(u + w, u - w, "mul") == u ** 2 - w ** 2


def test_binomial_cube():
    assert poly_arith(1 + w, 3, "pow") == P("1 + 3*w + 3*w^2 + w^3")


def test_product_mod_3():
    D = CoeffDomain(3, 1)
    assert P("u^3-3", D) * P("u^9-3", D) == P("u^12", D)


def test_domain_mismatch_and_negative_power():
    with pytest.raises(DomainMismatchError):
        P("u", CoeffDomain(3, 1)) + P("u")
    with pytest.raises(PolyError):
        poly_arith(u, -1, "pow")


@given(polys(), polys(), polys())
def test_ring_axioms_over_z(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a


@given(polys(domain=CoeffDomain(5, 2)), polys(domain=CoeffDomain(5, 2)),
       polys(domain=CoeffDomain(5, 2)))
def test_ring_axioms_mod_pn(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MPoly.const(0, CoeffDomain(5, 2))


@given(polys(), st.integers(0, 6))
def test_pow_matches_repeated_product(a, k):
    out = MPoly.const(1)
    for _ in range(k):
        out = out * a
    assert a ** k == out


# -- substitute --------------------------------------------------------------------


def test_substitute_examples():
    assert substitute(u ** 2, {"u": u ** 3}) == u ** 6
    assert substitute(u + w, {"u": (1 + w) ** 3 * u}) == (1 + w) ** 3 * u + w


@given(polys(), polys(), polys(max_deg=2, max_terms=3))
def test_substitute_is_a_homomorphism(f, g, h):
    b = {"u": h}
    assert substitute(f * g, b) == substitute(f, b) * substitute(g, b)
    assert substitute(f + g, b) == substitute(f, b) + substitute(g, b)


@given(polys())
def test_identity_substitution(f):
    assert substitute(f, {"u": u, "w": w}) == f


@given(polys(max_deg=3), polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3))
def test_substitution_composes(f, g, h):
    s1 = {"u": g}
    s2 = {"u": h, "w": w + 1}
    composed = {"u": substitute(g, s2), "w": substitute(w, s2)}
    assert substitute(substitute(f, s1), s2) == substitute(f, composed)


# -- exact_divide -------------------------------------------------------------------


def test_exact_divide_examples():
    v = (1 + w) ** 3 - 1
    assert exact_divide(v * u, v).quotient == u
    q = exact_divide((1 + w) ** 9 - 1, (1 + w) ** 3 - 1).quotient
    assert q == 1 + (1 + w) ** 3 + (1 + w) ** 6
    res = exact_divide(u + 1, u)
    assert not res.divisible and res.remainder is not None


def test_exact_divide_flags_non_integral_quotient():
    res = exact_divide(u + 1, 2 * u + 2)
    assert not res.divisible and "integral" in res.reason


def test_exact_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_divide(u, MPoly.const(0))


@given(polys(), nonzero_polys())
def test_exact_divide_recovers_factor(a, b):
    res = exact_divide(a * b, b)
    assert res.divisible and res.quotient == a


def test_exact_divide_large_uses_fast_path():
    a = ((1 + w) ** 60 - 1) * (u + w) ** 3
    b = (u + w) ** 3
    assert exact_divide(a, b).quotient == (1 + w) ** 60 - 1


# -- p-divisibility and reduction ------------------------------------------------------


def test_divide_by_p_examples():
    assert divide_by_p(P("3*w + 3*w^2"), 1, 3) == P("w + w^2")
    assert divide_by_p(5 * u, 1, 5) == u
    with pytest.raises(NotDivisibleByPError):
        divide_by_p(u + 1, 1, 3)


def test_divide_by_p_mod_drops_precision():
    D = CoeffDomain(3, 3)
    out = divide_by_p(P("9*u + 3", D), 1)
    assert out.domain == CoeffDomain(3, 2) and out == P("3*u + 1", CoeffDomain(3, 2))
    with pytest.raises(PolyError):
        divide_by_p(P("u", D), 3)


@given(polys(), st.sampled_from([3, 5, 7]))
def test_divide_by_p_inverts_multiplication(a, p):
    assert divide_by_p(p * a, 1, p) == a


def test_u_valuation_examples():
    assert u_valuation(P("u^4 + u^7*w")) == 4
    assert u_valuation(MPoly.const(0)) == math.inf
    assert u_valuation(reduce_mod_pn(P("(u^3-3)*u"), 3, 1)) == 4


def test_reduce_mod_pn_examples():
    assert reduce_mod_pn(P("u^3-3"), 3, 1) == P("u^3", CoeffDomain(3, 1))
    assert reduce_mod_pn(P("9*u+3"), 3, 2) == P("3", CoeffDomain(3, 2))
    assert reduce_mod_pn(P("(u^6-3)*(u^18-3)*u"), 3, 1) == P("u^25", CoeffDomain(3, 1))


@given(polys(), polys(), st.sampled_from([(3, 1), (3, 2), (5, 2)]))
def test_reduction_is_a_ring_map(a, b, pn):
    p, N = pn
    r = lambda f: reduce_mod_pn(f, p, N)  # noqa: E731
    assert r(a * b) == r(r(a) * r(b))
    assert r(a + b) == r(a) + r(b)
