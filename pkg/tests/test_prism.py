from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prismcheck.polyring import MPoly, PolyError, parse_poly, reduce_mod_pn
from prismcheck.prism import (
    DeltaPolyRing,
    DepthExhaustedError,
    EisensteinError,
    LocElem,
    PrismParams,
    check_delta_laws,
    delta,
    expand_v,
    frobenius,
    loc_arith,
    phi_tau_commute_check,
    tau_on_loc,
    tau_power,
)

from strategies import polys

u, w = MPoly.var("u"), MPoly.var("w")
P = parse_poly


# -- parameters -------------------------------------------------------------------


def test_prism_params_from_text():
    pp = PrismParams.from_poly(3, "u^2-3")
    assert pp.e == 2 and pp.E == P("u^2 - 3")


@pytest.mark.parametrize("text,msg", [
    ("u^2-9", "p\\^2"),
    ("u^2-1", "divisible by p"),
    ("2*u^2-3", "monic"),
    ("u^2+u-3", "divisible by p"),
])
def test_eisenstein_validation_names_the_failure(text, msg):
    with pytest.raises(EisensteinError, match=msg):
        PrismParams.from_poly(3, text)


def test_prism_params_rejects_p2():
    with pytest.raises(PolyError, match="odd prime"):
        PrismParams.standard(2, 1)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("e", [1, 2, 5])
def test_standard_shapes_are_eisenstein(p, e):
    assert PrismParams.standard(p, e, "pure").E == u ** e - p
    if e == 1:
        with pytest.raises(EisensteinError, match="e >= 2"):
            PrismParams.standard(p, e, "mixed")
    else:
        assert PrismParams.standard(p, e, "mixed").E == u ** e + p * u ** (e // 2) - p


# -- Frobenius, tau, delta ---------------------------------------------------------


def test_frobenius_examples():
    assert frobenius(u, 1, 3) == u ** 3
    assert frobenius(w, 1, 3) == P("3*w + 3*w^2 + w^3")
    v = (1 + w) ** 3 - 1
    assert frobenius(v, 1, 3) == (1 + w) ** 9 - 1
    assert frobenius(u + w, 0, 3) == u + w


def test_tau_examples():
    assert tau_power(u, 0, 3) == (1 + w) ** 3 * u
    assert tau_power(w, 2, 3) == w
    assert tau_power(u ** 2, 1, 3) == (1 + w) ** 18 * u ** 2


def test_tau_in_v_basis_matches_w_basis():
    f = P("u^3 - 2*u + 7")
    assert expand_v(tau_power(f, 1, 3, basis="v"), 3) == tau_power(f, 1, 3)


def test_delta_examples():
    assert delta(u, 3).is_zero()
    assert delta(w, 3) == w + w ** 2
    v = (1 + w) ** 3 - 1
    assert delta(v, 3) == v + v ** 2


@given(polys(max_deg=3), st.sampled_from([3, 5]))
def test_frobenius_lifts_p_power(f, p):
    assert reduce_mod_pn(frobenius(f, 1, p) - f ** p, p, 1).is_zero()


@given(polys(max_deg=2, max_terms=3), st.integers(0, 2), st.integers(0, 1))
def test_frobenius_iterates(f, s1, s2):
    assert frobenius(f, s1 + s2, 3) == frobenius(frobenius(f, s1, 3), s2, 3)


@given(polys(max_deg=3), st.integers(1, 3))
def test_tau_power_composes_by_exponent(f, k):
    # k applications of tau^{3^0} scale u by (1+w)^{3k}
    out = f
    for _ in range(k):
        out = tau_power(out, 0, 3)
    from prismcheck.polyring import substitute
    assert out == substitute(f, {"u": (1 + w) ** (3 * k) * u})


# -- delta-ring laws -----------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_delta_laws_symbolic(p):
    rep = check_delta_laws(2, 2, p)
    assert rep.passed, rep.as_dict()
    assert set(rep.laws) >= {"frobenius", "product", "sum", "unit_mul", "unit_add"}


def test_delta_structural_agrees_with_frobenius_form():
    R = DeltaPolyRing(2, 2, 3)
    x, y = R.sym(1), R.sym(2)
    for f in [x * y + 2, x ** 2 - 3 * y, x + y * x ** 2]:
        assert R.delta(f) == R.delta_structural(f)


def test_depth_cap_is_explicit():
    R = DeltaPolyRing(1, 1, 3)
    dx = R.sym(1, 1)
    with pytest.raises(DepthExhaustedError):
        R.delta(dx)
    with pytest.raises(DepthExhaustedError):
        R.sym(1, 2)


# -- fractions -------------------------------------------------------------------------


def test_loc_arith_examples():
    E = P("u - 3")
    v = (1 + w) ** 3 - 1
    assert LocElem(u, 1, E) + LocElem(v, 1, E) == LocElem(u + v, 1, E)
    assert LocElem(u, 1, E) * LocElem(u, 1, E) == LocElem(u ** 2, 2, E)
    assert LocElem(E, 1, E) == LocElem(MPoly.const(1), 0, E)


def test_loc_arith_base_mismatch():
    from prismcheck.polyring import DomainMismatchError
    with pytest.raises(DomainMismatchError):
        loc_arith(LocElem(u, 1, P("u-3")), LocElem(u, 1, P("u+3")), "add")


def test_loc_elem_unhashable():
    with pytest.raises(TypeError):
        hash(LocElem(u, 0, P("u-3")))


def test_tau_on_loc_examples():
    pp = PrismParams.from_poly(3, "u-3")
    E = pp.E
    a = tau_on_loc(LocElem(u, 0, E), 0, pp)
    assert a.num == (1 + w) ** 3 * u and a.k == 0
    b = tau_on_loc(LocElem(E, 1, E), 0, pp)
    assert b == LocElem(MPoly.const(1), 0, tau_power(E, 0, 3))
    c = tau_on_loc(LocElem(u, 1, E), 0, pp)
    assert c.num == (1 + w) ** 3 * u and c.base == tau_power(E, 0, 3)


# -- phi and tau commute ------------------------------------------------------------------


def test_phi_tau_commute_on_u_and_w():
    for f in (u, w):
        assert frobenius(tau_power(f, 0, 3), 1, 3) == tau_power(frobenius(f, 1, 3), 0, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_phi_tau_commute_random(p):
    rep = phi_tau_commute_check(p, trials=10, seed=1, deg=6)
    assert rep.passed, rep.counterexample
