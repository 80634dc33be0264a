"""Named elements of the model ring and certificate-based lemma verifiers.

Ideal membership is never decided; every claim "x lies in I" is witnessed by
an explicit coefficient vector (:class:`MembershipCert`) or an exact
quotient, and every witness is re-checked by exact multiplication before a
report is marked ``pass``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any

from prismcheck._kernel import dense_mul
from prismcheck.polyring import ZZ, MPoly, PolyError, exact_divide, reduce_mod_pn, u_valuation
from prismcheck.prism import PrismParams, delta, frobenius, tau_power

__all__ = [
    "CrsIdeal",
    "MembershipCert",
    "LemmaReport",
    "make_omega",
    "phi_power_omega",
    "phi_power_v",
    "make_xi",
    "make_Is",
    "geometric_quotient",
    "coeff_witness",
    "verify_lemma_coeff",
    "verify_delta_ideal",
    "verify_tau_stability",
    "theta",
    "verify_is_mod_pn",
    "verify_blowup_generator",
    "random_u_poly",
]


def _unit(p_power: int, basis: str) -> MPoly:
    """(1+x)^n for x in {w, v}."""
    return (MPoly.var(basis) + 1) ** p_power


def make_omega(p: int) -> MPoly:
    """omega = sum_{j<p} (1+w)^j, the quotient v / w."""
    one_w = MPoly.var("w") + 1
    out = MPoly.const(0)
    for j in range(p):
        out = out + one_w ** j
    return out


def phi_power_omega(p: int, j: int) -> MPoly:
    """phi^j(omega) = sum_{k<p} (1+w)^{p^j k}, built directly (not via frobenius)."""
    base = _unit(p ** j, "w")
    out = MPoly.const(1)
    acc = MPoly.const(1)
    for _ in range(1, p):
        acc = acc * base
        out = out + acc
    return out


def phi_power_v(p: int, s: int, basis: str = "w") -> MPoly:
    """phi^s(v) = (1+w)^{p^{s+1}} - 1, or (1+v)^{p^s} - 1 in the v-basis."""
    if basis == "w":
        return _unit(p ** (s + 1), "w") - 1
    if basis == "v":
        return _unit(p ** s, "v") - 1
    raise PolyError(f"unknown basis {basis!r}")


def make_xi(p: int, s: int, i: int, check: bool = True) -> MPoly:
    """xi_{s,i} = w * phi^{i+1}(omega) ... phi^s(omega).

    With ``check`` the product form is compared with the quotient
    phi^s(v) / (omega * phi(omega) ... phi^i(omega)) computed by exact
    division.
    """
    if not 0 <= i <= s:
        raise PolyError(f"need 0 <= i <= s, got i={i}, s={s}")
    xi = MPoly.var("w")
    for j in range(i + 1, s + 1):
        xi = xi * phi_power_omega(p, j)
    if check:
        denom = MPoly.const(1)
        for j in range(0, i + 1):
            denom = denom * phi_power_omega(p, j)
        res = exact_divide(phi_power_v(p, s), denom)
        if not res.divisible or res.quotient != xi:
            raise AssertionError(f"quotient and product forms of xi_{s},{i} disagree (p={p})")
    return xi


@dataclass(frozen=True)
class MembershipCert:
    """Witness that ``target = sum coefficients[i] * gens[i]``."""

    target: MPoly
    coefficients: tuple
    gens: tuple

    def check(self) -> bool:
        if len(self.coefficients) != len(self.gens):
            return False
        total = MPoly.const(0, self.target.domain)
        for c, g in zip(self.coefficients, self.gens):
            if not c.is_zero():
                total = total + c * g
        return total == self.target


@dataclass(frozen=True)
class CrsIdeal:
    """I_s = (xi_{s,0} u, xi_{s,1} u^p, ..., xi_{s,s} u^{p^s})."""

    p: int
    s: int
    gens: tuple

    def certify(self, target: MPoly, coefficients) -> MembershipCert:
        cert = MembershipCert(target, tuple(coefficients), self.gens)
        if not cert.check():
            raise AssertionError("membership certificate does not re-check")
        return cert


def make_Is(p: int, s: int, check: bool = True) -> CrsIdeal:
    u = MPoly.var("u")
    gens = tuple(make_xi(p, s, i, check=check) * u ** (p ** i) for i in range(s + 1))
    return CrsIdeal(p, s, gens)


@dataclass
class LemmaReport:
    """Outcome of one verifier cell; ``witness`` values are polynomial text."""

    lemma: str
    params: dict
    verdict: str
    witness: dict = field(default_factory=dict)
    seed: int | None = None
    elapsed_ms: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "lemma": self.lemma,
            "params": dict(self.params),
            "verdict": self.verdict,
            "witness": _textify(self.witness),
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing else None,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _textify(obj):
    if isinstance(obj, MPoly):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _textify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_textify(v) for v in obj]
    return obj


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.start) * 1000


# -- Lemma "coeff": tau^{p^s}(f) - f = phi^s(v) u Q ---------------------------


def geometric_quotient(i: int, s: int, p: int, basis: str = "w") -> MPoly:
    """sum_{j<i} (1+v)^{p^s j}; in the w-basis (1+v)^{p^s} = (1+w)^{p^{s+1}}."""
    if i < 1:
        raise PolyError("i must be at least 1")
    step = _unit(p ** (s + 1), "w") if basis == "w" else _unit(p ** s, "v")
    out = MPoly.const(1)
    acc = MPoly.const(1)
    for _ in range(1, i):
        acc = acc * step
        out = out + acc
    return out


def _geometric_table(n: int, s: int, p: int, basis: str) -> list:
    """[G_1, ..., G_n] with G_i the geometric quotient of length i."""
    step = _unit(p ** (s + 1), "w") if basis == "w" else _unit(p ** s, "v")
    table = []
    out = MPoly.const(1)
    acc = MPoly.const(1)
    for k in range(n):
        if k:
            acc = acc * step
            out = out + acc
        table.append(out)
    return table


def coeff_witness(f: MPoly, s: int, p: int, basis: str = "w", table: list | None = None) -> MPoly:
    """Q = sum_{i>=1} a_i G_i u^{i-1} for f = sum a_i u^i."""
    if set(f.gens) - {"u"}:
        raise PolyError(f"expected a polynomial in u only, got variables {f.gens}")
    deg = max(f.degree("u"), 0)
    if table is None or len(table) < deg:
        table = _geometric_table(deg, s, p, basis)
    u = MPoly.var("u")
    Q = MPoly.const(0)
    for (i,), a in ((e if e else (0,), c) for e, c in f.items()):
        if i >= 1:
            Q = Q + a * table[i - 1] * u ** (i - 1)
    return Q


def _dense(poly: MPoly, var: str, length: int) -> list:
    """Coefficient list of a univariate polynomial in ``var``, padded to ``length``."""
    out = [0] * length
    for e, c in poly.items():
        out[e[0] if e else 0] = c
    return out


def _binomial_row(n: int) -> list:
    """[C(n, 0), ..., C(n, n)] by the multiplicative recurrence."""
    row = [1] * (n + 1)
    for j in range(n):
        row[j + 1] = row[j] * (n - j) // (j + 1)
    return row


class _LemmaTables:
    """Per-(p, s, basis) data shared by all trials of the coefficient lemma.

    ``powers[k]`` is (1+x)^{Nk} from binomial coefficients and ``geo[k-1]``
    the geometric quotient G_k from repeated multiplication, so the two
    sides of the per-coefficient identity come from unrelated computations.
    """

    def __init__(self, deg: int, s: int, p: int, basis: str):
        step = p ** (s + 1) if basis == "w" else p ** s
        self.phi = _dense(phi_power_v(p, s, basis), basis, step + 1)
        self.powers = [_binomial_row(step * k) for k in range(deg + 1)]
        self.geo = [_dense(g, basis, step * k + 1)
                    for k, g in enumerate(_geometric_table(deg, s, p, basis))]
        # phi^s(v) * G_k does not depend on f; by linearity each trial scales it
        self.products = []
        for g in self.geo:
            prod = dense_mul(self.phi, g)
            while prod and prod[-1] == 0:
                prod.pop()
            self.products.append(prod)


def verify_lemma_coeff(f: MPoly, s: int, p: int, basis: str = "w", cache: dict | None = None,
                       seed: int | None = None) -> LemmaReport:
    """Check tau^{p^s}(f) - f = phi^s(v) * u * Q with the explicit witness Q.

    tau^{p^s} scales u^k by (1+x)^{Nk} (x = w, N = p^{s+1}; or x = v,
    N = p^s), so the identity splits by u-degree into
    a_k ((1+x)^{Nk} - 1) = a_k (phi^s(v) G_k), checked one k at a time on
    dense coefficient lists.  The product phi^s(v) G_k is formed once per
    table and scaled by each trial's a_k.  ``basis="v"`` works in the subring Z[u, v],
    which embeds into Z[u, w] via v = (1+w)^p - 1.  ``cache`` shares the
    tables between calls with equal (p, s, basis).
    """
    if basis not in ("w", "v"):
        raise PolyError(f"unknown basis {basis!r}")
    if set(f.gens) - {"u"}:
        raise PolyError(f"expected a polynomial in u only, got variables {f.gens}")
    with _Timer() as tm:
        deg = max(f.degree("u"), 1)
        tables = None if cache is None else cache.get((p, s, basis))
        if tables is None or len(tables.geo) < deg:
            tables = _LemmaTables(deg, s, p, basis)
            if cache is not None:
                cache[(p, s, basis)] = tables
        ok = True
        q_terms = {}
        for e, a in f.items():
            k = e[0] if e else 0
            if k == 0:
                continue
            lhs = [a * c for c in tables.powers[k]]
            lhs[0] -= a
            rhs = [a * c for c in tables.products[k - 1]]
            ok = ok and lhs == rhs
            for j, c in enumerate(tables.geo[k - 1]):
                if c:
                    q_terms[(k - 1, j)] = a * c
        Q = MPoly._raw(q_terms, ("u", basis), ZZ)
    return LemmaReport("lemma-coeff", {"p": p, "s": s, "basis": basis, "f": str(f)},
                       "pass" if ok else "fail", {"Q": Q}, seed, tm.ms)


def random_u_poly(rng: random.Random, deg: int, bound: int) -> MPoly:
    """Dense random polynomial in u of degree <= deg, coefficients in [-bound, bound]."""
    return MPoly({(k,): rng.randint(-bound, bound) for k in range(deg + 1)}, ("u",))


# -- I_s is a delta-ideal and G_K-stable ------------------------------------


def verify_delta_ideal(p: int, s: int) -> LemmaReport:
    """delta(xi_{s,i} u^{p^i}) is a multiple of gens[min(i+1, s)] for every i."""
    with _Timer() as tm:
        ideal = make_Is(p, s)
        cofactors = []
        certs_ok = True
        failures = []
        for i, g in enumerate(ideal.gens):
            target = delta(g, p)
            j = min(i + 1, s)
            res = exact_divide(target, ideal.gens[j])
            if not res.divisible:
                failures.append(i)
                cofactors.append(None)
                continue
            coeffs = [MPoly.const(0)] * (s + 1)
            coeffs[j] = res.quotient
            cert = MembershipCert(target, tuple(coeffs), ideal.gens)
            certs_ok = certs_ok and cert.check()
            cofactors.append(res.quotient)
        ok = not failures and certs_ok
    rep = LemmaReport("delta-ideal", {"p": p, "s": s}, "pass" if ok else "fail",
                      {"cofactors": cofactors}, None, tm.ms)
    if failures:
        rep.notes.append(f"no cofactor for i in {failures}")
    return rep


def verify_tau_stability(p: int, s: int) -> LemmaReport:
    """tau scales each generator of I_s and phi^s(v) u by a unit (1+w)^{p^k}."""
    with _Timer() as tm:
        ideal = make_Is(p, s)
        u = MPoly.var("u")
        failures = []
        scalars = []
        for i, g in enumerate(ideal.gens):
            unit = _unit(p ** (i + 1), "w")
            coeffs = [MPoly.const(0)] * (s + 1)
            coeffs[i] = unit
            cert = MembershipCert(tau_power(g, 0, p), tuple(coeffs), ideal.gens)
            if not cert.check():
                failures.append(f"generator {i}")
            scalars.append(unit)
        base = phi_power_v(p, s) * u
        if tau_power(base, 0, p) != _unit(p, "w") * base:
            failures.append("phi^s(v) u")
        # tau(u) - u = omega * (w u): a certificate for membership in I_0
        omega = make_omega(p)
        i0 = make_Is(p, 0, check=False)
        if not MembershipCert(tau_power(u, 0, p) - u, (omega,), i0.gens).check():
            failures.append("tau(u) - u in I_0")
    rep = LemmaReport("tau-stability", {"p": p, "s": s}, "fail" if failures else "pass",
                      {"scalars": scalars, "tau(u)-u cofactor": omega}, None, tm.ms)
    rep.notes.extend(failures)
    return rep


# -- mod p^n divisibility of theta_{s,i} ---------------------------------------


def theta(params: PrismParams, s: int, i: int) -> MPoly:
    """phi^{i+1}(E) ... phi^s(E) * u^{p^i}, an element of Z[u]."""
    if not 0 <= i <= s:
        raise PolyError(f"need 0 <= i <= s, got i={i}, s={s}")
    p = params.p
    out = MPoly.var("u") ** (p ** i)
    E = params.E
    for j in range(i + 1, s + 1):
        out = out * frobenius(E, j, p)
    return out


def verify_is_mod_pn(params: PrismParams, n: int, s: int) -> LemmaReport:
    """u-adic valuation of theta_{s,i} mod p^n is at least p^{max(0, s+1-n)}."""
    if n < 1 or s < 0:
        raise PolyError("need n >= 1 and s >= 0")
    with _Timer() as tm:
        p = params.p
        t = max(0, s + 1 - n)
        bound = p ** t
        vals = []
        for i in range(s + 1):
            vals.append(u_valuation(reduce_mod_pn(theta(params, s, i), p, n)))
        ok = all(v >= bound for v in vals)
    rep = LemmaReport(
        "is-mod-pn",
        {"p": p, "e": params.e, "E": str(params.E), "n": n, "s": s},
        "pass" if ok else "fail",
        {"t": t, "bound": bound, "valuations": vals, "slack": [v - bound for v in vals]},
        None, tm.ms)
    rep.notes.append("cited step: xi_{s,i}/xi'_{s,i} is a unit of A_inf (not modeled)")
    return rep


# -- the generator identity for fractions y / E(u) ---------------------------


def verify_blowup_generator(y: MPoly, params: PrismParams, s: int, basis: str = "w",
                            cache: dict | None = None, seed: int | None = None) -> LemmaReport:
    """Cross-multiplied identity behind tau^{p^s}(y/E) - y/E lying in I_s.

    Num = tau(y) E - y tau(E) must equal phi^s(v) u (Q_y E - y Q_E), where
    Q_y and Q_E are the coefficient witnesses for y and E.
    """
    if set(y.gens) - {"u"}:
        raise PolyError("y must be a polynomial in u")
    with _Timer() as tm:
        p = params.p
        E = params.E
        deg = max(y.degree("u"), E.degree("u"), 1)
        table = None
        if cache is not None:
            table = cache.get((p, s, basis))
            if table is None or len(table) < deg:
                table = _geometric_table(deg, s, p, basis)
                cache[(p, s, basis)] = table
        Qy = coeff_witness(y, s, p, basis, table)
        QE = coeff_witness(E, s, p, basis, table)
        num = tau_power(y, s, p, basis=basis) * E - y * tau_power(E, s, p, basis=basis)
        rhs = phi_power_v(p, s, basis) * MPoly.var("u") * (Qy * E - y * QE)
        ok = num == rhs
    rep = LemmaReport("blowup-generator",
                      {"p": p, "e": params.e, "E": str(E), "s": s, "basis": basis, "y": str(y)},
                      "pass" if ok else "fail", {"Q_y": Qy, "Q_E": QE}, seed, tm.ms)
    rep.notes.append("cited step: omega = unit * E(u) in A_inf converts the identity into I_s-membership")
    return rep
