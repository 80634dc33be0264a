from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prismcheck.herbrand import (
    BreakError,
    RamBreaks,
    c0_of,
    convert_convention,
    cyclotomic_breaks,
    cyclotomic_c0_formula,
    herbrand_phi,
    herbrand_psi,
    mu_lambda,
    serre_phi,
    transitivity_mu,
)


@st.composite
def break_data(draw):
    """Valid lower filtrations: decreasing divisor chains on increasing rationals."""
    order = draw(st.sampled_from([2, 4, 6, 8, 9, 12, 18, 27]))
    n = draw(st.integers(0, 4))
    lam = F(0)
    out = []
    for _ in range(n):
        lam += F(draw(st.integers(1, 12)), draw(st.integers(1, 4)))
        out.append((lam, order))
        divs = [d for d in range(1, order) if order % d == 0]
        order = draw(st.sampled_from(divs))
        if order == 1:
            break
    return RamBreaks(tuple(out))


rationals = st.fractions(min_value=0, max_value=200, max_denominator=12)


def test_trivial_group_is_identity():
    phi = herbrand_phi(RamBreaks(()))
    assert phi(F(7, 2)) == F(7, 2) and phi.slopes == (1,)
    assert herbrand_psi(phi)(5) == 5
    assert mu_lambda(RamBreaks(())) == (0, 0)


def test_cyclotomic_3_2():
    br = cyclotomic_breaks(3, 2)
    assert br.breaks == ((1, 6), (3, 3))
    phi = herbrand_phi(br)
    assert (phi(1), phi(3), phi.final_slope) == (1, 2, F(1, 6))
    assert herbrand_psi(phi)(2) == 3
    assert herbrand_psi(phi)(phi(F(7, 2))) == F(7, 2)
    assert mu_lambda(br) == (3, 2)


def test_cyclotomic_3_1_tame():
    br = cyclotomic_breaks(3, 1)
    assert br.breaks == ((1, 2),)
    assert herbrand_phi(br)(5) == 1 + F(4, 2)


def test_two_segment_synthetic():
    # |G_(t)| = 8 on (0,1], 4 on (1,2], 2 on (2,4], trivial beyond
    br = RamBreaks(((1, 8), (2, 4), (4, 2)))
    phi = herbrand_phi(br)
    assert phi(2) == 1 + F(1, 2)
    assert phi(4) == 1 + F(1, 2) + F(2, 4)
    assert phi(6) == 2 + F(2, 8)


@pytest.mark.parametrize("bad", [
    ((2, 6), (1, 3)),     # not increasing
    ((1, 6), (3, 4)),     # 4 does not divide 6
    ((1, 6), (3, 6)),     # not strictly decreasing
    ((1, 1),),            # trivial listed
])
def test_bad_breaks(bad):
    with pytest.raises(BreakError):
        RamBreaks(bad)


def test_breaks_from_json():
    assert RamBreaks.from_json("[[1,6],[3,3]]") == cyclotomic_breaks(3, 2)
    assert RamBreaks.from_json('[["1/2", 4]]').breaks == ((F(1, 2), 4),)
    for bad in ("[[1.5, 2]]", "{}", "[[1]]", "not json"):
        with pytest.raises(BreakError):
            RamBreaks.from_json(bad)


@given(break_data(), rationals)
def test_phi_matches_serre_oracle(br, t):
    phi = herbrand_phi(br)
    if t <= 1:
        assert phi(t) == t
    else:
        assert phi(t) == serre_phi(br, t - 1) + 1


@given(break_data(), st.lists(rationals, min_size=1, max_size=10))
def test_psi_round_trip(br, ts):
    phi = herbrand_phi(br)
    psi = herbrand_psi(phi)
    for x, y in phi.points:
        assert psi(y) == x
    for t in ts:
        assert psi(phi(t)) == t and phi(psi(t)) == t


@given(break_data())
def test_shape(br):
    phi = herbrand_phi(br)
    assert phi.is_concave() and herbrand_psi(phi).is_convex()
    assert phi(0) == 0 and phi(1) == 1


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c0_cyclotomic_matches_formula(p, n):
    e = (p - 1) * p ** (n - 1)
    psi = herbrand_psi(herbrand_phi(cyclotomic_breaks(p, n)))
    assert c0_of(psi, e) == cyclotomic_c0_formula(p, n)


def test_c0_examples_and_errors():
    ident = herbrand_psi(herbrand_phi(RamBreaks(())))
    assert c0_of(ident, 1) == 0
    psi = herbrand_psi(herbrand_phi(cyclotomic_breaks(3, 2)))
    assert c0_of(psi, 6) == 4
    with pytest.raises(BreakError):
        c0_of(psi, 5)


def test_conventions():
    assert convert_convention(2, "paper-upper", "serre-upper") == 1
    assert convert_convention(3, "paper-lower", "fontaine-lower", e_tilde=6) == F(1, 2)
    with pytest.raises(BreakError):
        convert_convention(3, "paper-lower", "fontaine-lower")
    with pytest.raises(BreakError):
        convert_convention(3, "paper-lower", "serre-upper")


@given(rationals, st.sampled_from(["paper", "serre", "fontaine"]),
       st.sampled_from(["paper", "serre", "fontaine"]), st.sampled_from(["upper", "lower"]))
def test_convention_round_trip(x, a, b, kind):
    src, dst = f"{a}-{kind}", f"{b}-{kind}"
    there = convert_convention(x, src, dst, e_tilde=6)
    assert convert_convention(there, dst, src, e_tilde=6) == x


def test_transitivity_examples():
    ident = herbrand_phi(RamBreaks(()))
    assert transitivity_mu(0, ident, F(7, 3)) == F(7, 3)
    phi = herbrand_phi(cyclotomic_breaks(3, 2))
    assert transitivity_mu(5, phi, 2) == 5
    assert transitivity_mu(2, phi, 9) == 3
