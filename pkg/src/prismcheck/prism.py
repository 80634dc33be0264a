"""Frobenius lift, the Galois element tau, the delta operator and fractions.

Conventions of the model ring Z[u, w]:

* ``phi``: u -> u^p, w -> (1+w)^p - 1, integer coefficients fixed;
* ``tau``: u -> (1+w)^p * u = (1+v) * u, fixing w (and hence v);
* ``delta(f) = (phi(f) - f^p) / p``.

Polynomials may also use the auxiliary symbol ``v`` directly (the subring
Z[u, v]); ``phi`` sends v to (1+v)^p - 1 and ``tau^{p^s}`` sends u to
(1+v)^{p^s} * u, so both maps restrict to Z[u, v].
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

from prismcheck.polyring import (
    ZZ,
    CoeffDomain,
    DomainMismatchError,
    MPoly,
    PolyError,
    divide_by_p,
    is_prime,
    parse_poly,
    substitute,
)

__all__ = [
    "PrismParams",
    "EisensteinError",
    "DepthExhaustedError",
    "v_in_w",
    "expand_v",
    "frobenius",
    "tau_power",
    "delta",
    "DeltaPolyRing",
    "DeltaLawReport",
    "check_delta_laws",
    "LocElem",
    "loc_arith",
    "tau_on_loc",
    "CommuteReport",
    "phi_tau_commute_check",
    "random_poly",
]


class EisensteinError(PolyError):
    """The supplied polynomial is not Eisenstein of the stated degree."""


class DepthExhaustedError(PolyError):
    """A delta-polynomial operation needs more delta-depth than configured."""


@dataclass(frozen=True)
class PrismParams:
    """Arithmetic context: odd prime p, ramification degree e, and E(u).

    ``eis`` lists the coefficients of E(u) in ascending degree.
    """

    p: int
    e: int
    eis: tuple

    def __post_init__(self):
        object.__setattr__(self, "eis", tuple(int(c) for c in self.eis))
        p, e, eis = self.p, self.e, self.eis
        if not isinstance(p, int) or p < 3 or not is_prime(p):
            raise EisensteinError(f"p must be an odd prime, got {p}")
        if not isinstance(e, int) or e < 1:
            raise EisensteinError(f"e must be a positive integer, got {e}")
        if len(eis) != e + 1:
            raise EisensteinError(f"E(u) must have degree e={e}, got degree {len(eis) - 1}")
        if eis[-1] != 1:
            raise EisensteinError("E(u) must be monic")
        for k, c in enumerate(eis[:-1]):
            if c % p:
                raise EisensteinError(f"coefficient of u^{k} is {c}, not divisible by p={p}")
        if eis[0] % (p * p) == 0:
            raise EisensteinError(f"constant term {eis[0]} is divisible by p^2")

    @classmethod
    def from_poly(cls, p: int, E: MPoly | str, e: int | None = None) -> "PrismParams":
        if isinstance(E, str):
            E = parse_poly(E)
        if set(E.gens) - {"u"}:
            raise EisensteinError(f"E(u) may only involve u, got variables {E.gens}")
        deg = E.degree("u")
        if deg < 1:
            raise EisensteinError("E(u) must have positive degree")
        if e is not None and e != deg:
            raise EisensteinError(f"E(u) has degree {deg} but e={e}")
        coeffs = [0] * (deg + 1)
        for (k, ), c in ((ex if ex else (0,), c) for ex, c in E.items()):
            coeffs[k] = c
        return cls(p, deg, tuple(coeffs))

    @classmethod
    def standard(cls, p: int, e: int, shape: str = "pure") -> "PrismParams":
        """``pure``: u^e - p.  ``mixed``: u^e + p*u^{floor(e/2)} - p (needs e >= 2).

        At e = 1 the mixed shape collapses to u, which is not Eisenstein.
        """
        if shape == "mixed" and e < 2:
            raise EisensteinError("mixed shape u^e + p*u^{floor(e/2)} - p needs e >= 2")
        coeffs = [0] * (e + 1)
        coeffs[e] = 1
        coeffs[0] = -p
        if shape == "mixed":
            coeffs[e // 2] += p
        elif shape != "pure":
            raise ValueError(f"unknown Eisenstein shape {shape!r}")
        return cls(p, e, tuple(coeffs))

    @property
    def E(self) -> MPoly:
        return MPoly({(k,): c for k, c in enumerate(self.eis)}, ("u",))

    def __str__(self):
        return f"p={self.p}, e={self.e}, E={self.E}"


def v_in_w(p: int, domain: CoeffDomain = ZZ) -> MPoly:
    """The element v = (1+w)^p - 1."""
    w = MPoly.var("w", domain)
    return (w + 1) ** p - 1


def expand_v(f: MPoly, p: int) -> MPoly:
    """Rewrite a polynomial in the auxiliary symbol ``v`` in terms of ``w``."""
    if "v" not in f.gens:
        return f
    return substitute(f, {"v": v_in_w(p, f.domain)})


def _check_p(p: int):
    if not isinstance(p, int) or p < 3 or not is_prime(p):
        raise PolyError(f"p must be an odd prime, got {p}")


def frobenius(f: MPoly, s: int, p: int) -> MPoly:
    """s-fold Frobenius: u -> u^{p^s}, w -> (1+w)^{p^s} - 1, v -> (1+v)^{p^s} - 1."""
    _check_p(p)
    if s < 0:
        raise PolyError("s must be nonnegative")
    if s == 0 or f.is_constant():
        return f
    extra = set(f.gens) - {"u", "w", "v"}
    if extra:
        raise PolyError(f"Frobenius is undefined on symbols {sorted(extra)}")
    q = p ** s
    dom = f.domain
    bindings = {"u": MPoly.var("u", dom) ** q}
    for x in ("w", "v"):
        if x in f.gens:
            bindings[x] = (MPoly.var(x, dom) + 1) ** q - 1
    return substitute(f, bindings)


def tau_power(f: MPoly, s: int, p: int, basis: str | None = None) -> MPoly:
    """Apply tau^{p^s}: u -> (1+w)^{p^{s+1}} u, w fixed.

    With ``basis="v"`` (the default for polynomials that mention v but not
    w) the image stays in Z[u, v]: the factor is then (1+v)^{p^s}.
    """
    _check_p(p)
    if s < 0:
        raise PolyError("s must be nonnegative")
    if basis not in (None, "w", "v"):
        raise PolyError(f"unknown basis {basis!r}")
    if "u" not in f.gens:
        return f
    dom = f.domain
    if basis is None:
        basis = "w" if "w" in f.gens or "v" not in f.gens else "v"
    if basis == "w":
        unit = MPoly.var("w", dom) + 1
        step = p ** (s + 1)
    else:
        unit = MPoly.var("v", dom) + 1
        step = p ** s
    u = MPoly.var("u", dom)
    parts = f.coeff_by("u")
    out = MPoly.const(0, dom)
    for k in sorted(parts):
        out = out + parts[k] * unit ** (step * k) * u ** k
    return out


def delta(f: MPoly, p: int) -> MPoly:
    """delta(f) = (phi(f) - f^p) / p; over Z/p^N the precision drops by one."""
    diff = frobenius(f, 1, p) - f ** p
    if f.domain.is_exact:
        return divide_by_p(diff, 1, p)
    if f.domain.p != p:
        raise DomainMismatchError(f"p={p} does not match {f.domain}")
    return divide_by_p(diff, 1)


# -- free delta-polynomials ------------------------------------------------


class DeltaPolyRing:
    """Free delta-ring on ``m`` symbols truncated at delta-depth ``D``.

    The symbol ``x{j}d{k}`` stands for delta^k(x_j).  Frobenius acts by
    phi(delta^k x) = (delta^k x)^p + p * delta^{k+1} x, which needs depth
    k+1; exceeding ``D`` raises :class:`DepthExhaustedError`.
    """

    def __init__(self, m: int, D: int, p: int):
        _check_p(p)
        if m < 1 or D < 1:
            raise PolyError("need m >= 1 symbols and depth D >= 1")
        self.m, self.D, self.p = m, D, p

    def sym(self, j: int, k: int = 0) -> MPoly:
        if not (1 <= j <= self.m and 0 <= k <= self.D):
            raise DepthExhaustedError(f"delta^{k} x{j} outside m={self.m}, D={self.D}")
        return MPoly.var(f"x{j}d{k}")

    def depth(self, f: MPoly) -> int:
        return max((int(g.split("d")[1]) for g in f.gens), default=0)

    def phi(self, f: MPoly) -> MPoly:
        bindings = {}
        for g in f.gens:
            j, k = (int(t) for t in g[1:].split("d"))
            if k >= self.D:
                raise DepthExhaustedError(
                    f"phi({g}) needs delta-depth {k + 1} > D={self.D}")
            x = MPoly.var(g)
            bindings[g] = x ** self.p + self.p * self.sym(j, k + 1)
        return substitute(f, bindings)

    def delta(self, f: MPoly) -> MPoly:
        """delta via the Frobenius lift."""
        return divide_by_p(self.phi(f) - f ** self.p, 1, self.p)

    def delta_structural(self, f: MPoly) -> MPoly:
        """delta computed from the sum/product laws applied term by term.

        Independent of :meth:`phi`: integers use delta(c) = (c - c^p)/p and
        symbols use the shift delta(delta^k x) = delta^{k+1} x.
        """
        p = self.p
        acc_val = MPoly.const(0)
        acc_delta = MPoly.const(0)
        for e, c in f.sorted_terms():
            mono_val = MPoly.const(c)
            mono_delta = MPoly.const((c - c ** p) // p)
            for g, x in zip(f.gens, e):
                j, k = (int(t) for t in g[1:].split("d"))
                if k >= self.D:
                    raise DepthExhaustedError(f"delta({g}) needs depth {k + 1} > D={self.D}")
                base, dbase = MPoly.var(g), self.sym(j, k + 1)
                for _ in range(x):
                    mono_val, mono_delta = (
                        mono_val * base,
                        mono_val ** p * dbase + base ** p * mono_delta + p * mono_delta * dbase,
                    )
            acc_delta = acc_delta + mono_delta - _sum_correction(acc_val, mono_val, p)
            acc_val = acc_val + mono_val
        return acc_delta


def _sum_correction(x: MPoly, y: MPoly, p: int) -> MPoly:
    """sum_{0<j<p} binom(p, j)/p * x^j * y^(p-j)."""
    out = MPoly.const(0, x.domain)
    if x.is_zero() or y.is_zero():
        return out
    for j in range(1, p):
        out = out + (comb(p, j) // p) * x ** j * y ** (p - j)
    return out


@dataclass
class DeltaLawReport:
    p: int
    m: int
    D: int
    laws: dict = field(default_factory=dict)
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(self.laws.values())

    def as_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "D": self.D, "laws": dict(self.laws),
                "cases": self.cases, "failures": list(self.failures),
                "verdict": "pass" if self.passed else "fail"}


def check_delta_laws(m: int = 2, D: int = 2, p: int = 3) -> DeltaLawReport:
    """Check the delta-ring laws as polynomial identities in the free ring.

    The universal instances use the bare symbols x1, x2.  Additional
    instances substitute composite elements of depth < D to exercise
    nontrivial coefficients and mixed depths.
    """
    R = DeltaPolyRing(m, D, p)
    rep = DeltaLawReport(p, m, D)
    law_ok = {"frobenius": True, "product": True, "sum": True,
              "unit_mul": True, "unit_add": True}

    elems = [R.sym(j) for j in range(1, m + 1)]
    if D >= 2:
        elems.append(R.sym(1, 1))
    elems.append(R.sym(1) * R.sym(m) + 1)
    elems.append(3 * R.sym(1) ** 2 - 2)
    elems = [f for f in elems if R.depth(f) < D]

    def record(name, ok, detail):
        rep.cases += 1
        if not ok:
            law_ok[name] = False
            rep.failures.append(f"{name}: {detail}")

    for x in elems:
        dx = R.delta(x)
        record("frobenius", R.phi(x) == x ** p + p * dx, f"x={x}")
        record("frobenius", R.delta_structural(x) == dx, f"structural delta at x={x}")
        record("unit_mul", R.delta(x * 1) == dx, f"x={x}")
        record("unit_add", R.delta(x + 0) == dx, f"x={x}")
    for x, y in combinations_with_replacement(elems, 2):
        if R.depth(x * y) >= D or R.depth(x + y) >= D:
            continue
        dx, dy = R.delta(x), R.delta(y)
        lhs = R.delta(x * y)
        rhs = x ** p * dy + y ** p * dx + p * dx * dy
        record("product", lhs == rhs, f"x={x}, y={y}")
        lhs = R.delta(x + y)
        rhs = dx + dy - _sum_correction(x, y, p)
        record("sum", lhs == rhs, f"x={x}, y={y}")
    rep.laws = law_ok
    return rep


# -- fractions with E(u)-power denominators ---------------------------------


@dataclass(frozen=True, eq=False)
class LocElem:
    """The fraction num / base^k; equality is cross-multiplied, never reduced."""

    num: MPoly
    k: int
    base: MPoly

    def __post_init__(self):
        if self.k < 0:
            raise PolyError("denominator exponent must be nonnegative")
        if self.base.is_zero():
            raise PolyError("denominator base must be nonzero")

    def __eq__(self, other):
        if not isinstance(other, LocElem):
            return NotImplemented
        if other.base != self.base:
            return False
        return self.num * self.base ** other.k == other.num * self.base ** self.k

    def __hash__(self):
        raise TypeError("LocElem equality is cross-multiplied; not hashable")

    def _lift(self, k: int) -> MPoly:
        return self.num * self.base ** (k - self.k)

    def __add__(self, other):
        return loc_arith(self, other, "add")

    def __sub__(self, other):
        return loc_arith(self, other, "sub")

    def __mul__(self, other):
        return loc_arith(self, other, "mul")


def loc_arith(a: LocElem, b: LocElem, op: str) -> LocElem:
    if a.base != b.base:
        raise DomainMismatchError("fractions over different denominator bases")
    if op == "mul":
        return LocElem(a.num * b.num, a.k + b.k, a.base)
    k = max(a.k, b.k)
    if op == "add":
        return LocElem(a._lift(k) + b._lift(k), k, a.base)
    if op == "sub":
        return LocElem(a._lift(k) - b._lift(k), k, a.base)
    raise PolyError(f"unknown operation {op!r}")


def tau_on_loc(a: LocElem, s: int, params: PrismParams) -> LocElem:
    """Apply tau^{p^s} to numerator and base separately."""
    if a.base != params.E:
        raise DomainMismatchError("tau_on_loc expects fractions over E(u)")
    return LocElem(tau_power(a.num, s, params.p), a.k, tau_power(a.base, s, params.p))


# -- commutation of phi and tau --------------------------------------------


def random_poly(rng: random.Random, gens: tuple, deg: int, terms: int, bound: int = 10,
                domain: CoeffDomain = ZZ) -> MPoly:
    """Random polynomial with up to ``terms`` monomials of total degree <= deg."""
    out = {}
    for _ in range(terms):
        e = [0] * len(gens)
        budget = rng.randint(0, deg)
        for _ in range(budget):
            e[rng.randrange(len(gens))] += 1
        c = rng.randint(-bound, bound)
        out[tuple(e)] = out.get(tuple(e), 0) + c
    return MPoly(out, gens, domain)


@dataclass
class CommuteReport:
    p: int
    trials: int
    seed: int
    counterexample: str | None = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def phi_tau_commute_check(p: int = 3, trials: int = 20, seed: int = 0, deg: int = 10,
                          s_values=(0, 1)) -> CommuteReport:
    """Check phi(tau^{p^s}(f)) = tau^{p^s}(phi(f)) on random f in Z[u, w]."""
    rng = random.Random(seed)
    rep = CommuteReport(p, trials, seed)
    start = time.perf_counter()
    for t in range(trials):
        f = random_poly(rng, ("u", "w"), deg, 6)
        s = s_values[t % len(s_values)]
        lhs = frobenius(tau_power(f, s, p), 1, p)
        rhs = tau_power(frobenius(f, 1, p), s, p)
        if lhs != rhs:
            rep.counterexample = f"s={s}, f={f}"
            break
    rep.elapsed_ms = (time.perf_counter() - start) * 1000
    return rep
