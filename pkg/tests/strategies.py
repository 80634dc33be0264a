"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from prismcheck.polyring import ZZ, CoeffDomain, MPoly


def polys(gens=("u", "w"), max_deg=4, max_terms=5, bound=50, domain: CoeffDomain = ZZ):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in gens])
    terms = st.dictionaries(exps, st.integers(-bound, bound), max_size=max_terms)
    return terms.map(lambda t: MPoly(t, gens, domain))


def nonzero_polys(**kw):
    return polys(**kw).filter(lambda f: not f.is_zero())


def u_polys(max_deg=8, bound=100):
    return st.lists(st.integers(-bound, bound), min_size=1, max_size=max_deg + 1).map(
        lambda cs: MPoly({(k,): c for k, c in enumerate(cs)}, ("u",)))
