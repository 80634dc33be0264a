"""Explicit ramification bounds for mod-p étale cohomology, in exact arithmetic.

Notation (p odd prime, e absolute ramification index, i cohomological degree):

    a = iep/(p-1),  b = ie/(p-1),
    alpha = floor(log_p max{ip/(p-1), (i-1)e/(p-1)}) + 1   (second entry dropped for i = 1),
    beta = (a - 1)/p^alpha.

The upper-numbering bound is mu > 1 + e*alpha + max{beta, e/(p-1)} and the
different bound is v_K(D_{L/K}) < 1 + e*alpha + beta.  Everything is a
:class:`fractions.Fraction` except Caruso's bound, whose log_p(ip) term is
kept symbolic (:class:`LogValue`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from prismcheck.herbrand import (
    c0_of,
    cyclotomic_breaks,
    cyclotomic_c0_formula,
    herbrand_phi,
    herbrand_psi,
)

__all__ = [
    "floor_log_p",
    "BoundComponents",
    "alpha_beta",
    "mu_bound_main",
    "different_bound_main",
    "simplified_bounds",
    "variant_mu_bound",
    "LogValue",
    "BoundResult",
    "caruso_liu_bound",
    "caruso_bound",
    "hattori_bound",
    "fontaine_abrashkin_bound",
    "different_Ks",
    "assemble_final_bound",
    "compare_table",
    "BaseField",
    "named_field",
    "example_diff_cyclotomic",
    "kummer_constants",
    "check_invariants",
    "METHODS",
]

METHODS = ("Main", "CarusoLiu", "Caruso", "Hattori", "FontaineAbrashkin")


def _check(p: int, e: int, i: int):
    if p < 3 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"p must be an odd prime, got {p}")
    if e < 1 or i < 1:
        raise ValueError("e and i must be positive integers")


def floor_log_p(q, p: int) -> int:
    """The integer t with p^t <= q < p^{t+1}, by exact comparison."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("floor_log_p needs q > 0")
    num, den = q.numerator, q.denominator
    t = 0
    if num >= den:
        while num >= den * p ** (t + 1):
            t += 1
    else:
        t = -1
        while num * p ** (-t) < den:
            t -= 1
    return t


@dataclass(frozen=True)
class BoundComponents:
    alpha: int
    beta: Fraction
    a: Fraction
    b: Fraction
    max_arg: Fraction
    max_label: str

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": str(self.beta), "a": str(self.a), "b": str(self.b),
                "max_arg": str(self.max_arg), "M0": self.max_label}


def alpha_beta(p: int, e: int, i: int) -> BoundComponents:
    _check(p, e, i)
    first = Fraction(i * p, p - 1)
    if i == 1:
        arg, label = first, "ip/(p-1)"
    else:
        second = Fraction((i - 1) * e, p - 1)
        arg, label = (first, "ip/(p-1)") if first >= second else (second, "(i-1)e/(p-1)")
    alpha = floor_log_p(arg, p) + 1
    a = Fraction(i * e * p, p - 1)
    b = Fraction(i * e, p - 1)
    beta = (a - 1) / p ** alpha
    return BoundComponents(alpha, beta, a, b, arg, label)


def mu_bound_main(p: int, e: int, i: int) -> Fraction:
    c = alpha_beta(p, e, i)
    return 1 + e * c.alpha + max(c.beta, Fraction(e, p - 1))


def different_bound_main(p: int, e: int, i: int) -> Fraction:
    c = alpha_beta(p, e, i)
    return 1 + e * c.alpha + c.beta


def variant_mu_bound(p: int, e: int, i: int) -> Fraction:
    """Main bound with ie in place of (i-1)e inside alpha, beta rescaled to match.

    This is the form the e > p simplified bound is derived from.
    """
    _check(p, e, i)
    alpha = floor_log_p(max(Fraction(i * p, p - 1), Fraction(i * e, p - 1)), p) + 1
    beta = (Fraction(i * e * p, p - 1) - 1) / p ** alpha
    return 1 + e * alpha + max(beta, Fraction(e, p - 1))


def simplified_bounds(p: int, e: int, i: int) -> list:
    """The tractable consequences, one entry per case whose guard holds.

    Each entry is ``(case, value, dominates_main)``.  The ``e>p`` case
    dominates only while e/(p-1) <= p, i.e. e <= p(p-1); beyond that the
    additive p no longer covers the e/(p-1) term and the flag is False.
    """
    _check(p, e, i)
    main = mu_bound_main(p, e, i)
    out = []
    if e <= p:
        v = Fraction(1 + e * (floor_log_p(Fraction(i * p, p - 1), p) + 1) + e)
        out.append(("e<=p", v, v >= main))
    else:
        v = Fraction(1 + e * (floor_log_p(Fraction(i * e, p - 1), p) + 1) + p)
        out.append(("e>p", v, v >= main))
    if i == 1:
        v = 1 + e * (1 + Fraction(1, p - 1))
        out.append(("i=1", v, v >= main))
    return out


@dataclass(frozen=True)
class LogValue:
    """rational + coeff * log_p(arg), with integer arg >= 1."""

    rational: Fraction
    coeff: Fraction
    arg: int
    base: int

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        # collapse exact powers of the base
        k, n = 0, self.arg
        while n > 1 and n % self.base == 0:
            n //= self.base
            k += 1
        if n == 1:
            object.__setattr__(self, "rational", self.rational + self.coeff * k)
            object.__setattr__(self, "coeff", Fraction(0))
            object.__setattr__(self, "arg", 1)

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0 or self.arg == 1

    def __sub__(self, other):
        if isinstance(other, LogValue):
            if other.is_rational:
                other = other.rational
            elif self.arg == other.arg and self.base == other.base:
                return LogValue(self.rational - other.rational, self.coeff - other.coeff,
                                self.arg, self.base)
            else:
                raise ValueError("cannot subtract log terms with different arguments")
        return LogValue(self.rational - Fraction(other), self.coeff, self.arg, self.base)

    def compare(self, q) -> int:
        """Sign of (self - q), decided exactly: log_p N > r/s iff N^s > p^r."""
        q = Fraction(q)
        d = q - self.rational  # compare coeff*log_p(arg) with d
        if self.is_rational:
            return (0 > d) - (0 < d)
        if self.coeff < 0:
            return -LogValue(-self.rational, -self.coeff, self.arg, self.base).compare(-q)
        target = d / self.coeff  # compare log_p(arg) with target
        if target <= 0:
            return 1  # log_p(arg) > 0 since arg > 1
        r, s = target.numerator, target.denominator
        lhs, rhs = self.arg ** s, self.base ** r
        return (lhs > rhs) - (lhs < rhs)

    def __gt__(self, q):
        return self.compare(q) > 0

    def __ge__(self, q):
        return self.compare(q) >= 0

    def __lt__(self, q):
        return self.compare(q) < 0

    def __le__(self, q):
        return self.compare(q) <= 0

    def decimal(self, digits: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            r = Decimal(self.rational.numerator) / Decimal(self.rational.denominator)
            if self.is_rational:
                out = r
            else:
                c = Decimal(self.coeff.numerator) / Decimal(self.coeff.denominator)
                out = r + c * Decimal(self.arg).ln() / Decimal(self.base).ln()
            ctx.prec = digits
            return +out

    def __float__(self):
        return float(self.decimal(20))

    def __str__(self):
        if self.is_rational:
            return str(self.rational)
        return f"{self.rational} + {self.coeff}*log_{self.base}({self.arg})"


@dataclass
class BoundResult:
    """One row of the comparison table."""

    method: str
    value: Fraction | LogValue | None
    applicable: bool
    reason: str = ""
    components: BoundComponents | None = None

    def as_dict(self) -> dict:
        val = self.value
        row = {"method": self.method, "applicable": self.applicable, "reason": self.reason,
               "value_exact": None, "value_float": None, "log_term": None, "components": None}
        if isinstance(val, LogValue):
            if val.is_rational:
                row["value_exact"] = _fmt(val.rational)
            else:
                row["value_exact"] = _fmt(val.rational)
                row["log_term"] = {"coeff": _fmt(val.coeff), "base": val.base, "arg": val.arg}
            row["value_float"] = float(val)
            row["value_decimal"] = str(val.decimal(50))
        elif val is not None:
            row["value_exact"] = _fmt(val)
            row["value_float"] = float(val)
        if self.components is not None:
            row["components"] = self.components.as_dict()
        return row


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def caruso_liu_bound(p: int, e: int, i: int) -> BoundResult:
    """1 + e*alpha_CL + max{beta_CL, e/(p-1)} with alpha_CL = floor(log_p(ip/(p-1))) + 1."""
    _check(p, e, i)
    arg = Fraction(i * p, p - 1)
    alpha = floor_log_p(arg, p) + 1
    a = Fraction(i * e * p, p - 1)
    beta = (a - 1) / p ** alpha
    comp = BoundComponents(alpha, beta, a, Fraction(i * e, p - 1), arg, "ip/(p-1)")
    value = 1 + e * alpha + max(beta, Fraction(e, p - 1))
    return BoundResult("CarusoLiu", value, True, "", comp)


def caruso_bound(p: int, e: int, i: int, c0=None, s0=None) -> BoundResult:
    """1 + c0 + e(s0 + log_p(ip)) + e/(p-1), log term kept symbolic."""
    _check(p, e, i)
    if c0 is None or s0 is None:
        return BoundResult("Caruso", None, False, "requires base-field constants c0(K), s0(K)")
    c0 = Fraction(c0)
    if c0 < 0 or s0 < 1:
        raise ValueError("need c0 >= 0 and s0 >= 1")
    value = LogValue(1 + c0 + e * s0 + Fraction(e, p - 1), e, i * p, p)
    return BoundResult("Caruso", value, True, f"c0={c0}, s0={s0}")


def hattori_bound(p: int, e: int, i: int) -> BoundResult:
    _check(p, e, i)
    if not i * e < p - 1:
        return BoundResult("Hattori", None, False, "requires ie < p-1")
    if i == 1:
        value = 1 + e + Fraction(e, p - 1)
    else:
        value = 1 + e + Fraction(e * i, p - 1) - Fraction(1, p)
    return BoundResult("Hattori", value, True)


def fontaine_abrashkin_bound(p: int, i: int, e: int = 1) -> BoundResult:
    if not (e == 1 and i < p - 1):
        return BoundResult("FontaineAbrashkin", None, False, "requires e = 1 and i < p-1")
    return BoundResult("FontaineAbrashkin", 1 + Fraction(i, p - 1), True)


def different_Ks(p: int, e: int, s: int) -> Fraction:
    """v_K of the different of K(pi^{1/p^s})/K."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0:
        return Fraction(0)
    return 1 + e * s - Fraction(1, p ** s)


def assemble_final_bound(p: int, e: int, i: int, e_N_samples=(1, 7, Fraction(36, 5))) -> tuple:
    """Re-derive the main bound along the proof chain; returns (value, trace).

    With s = alpha and m = a/p^s: mu_{M_s/N_s} <= e_N m, phi_{N_s/K} lies
    below the line of slope 1/e_N through (lambda_N, mu_N) beyond lambda_N,
    where lambda_N >= e_N(e/(p-1) + 1/p^s) and mu_N = 1 + es + e/(p-1), and
    transitivity takes the max.  The ramification index e_N = e_{N_s/K} is
    not known, so the chain is run for several sample values; they must all
    agree with each other and with :func:`mu_bound_main`.
    """
    comp = alpha_beta(p, e, i)
    s = comp.alpha
    m = comp.a / p ** s
    mu_N = 1 + e * s + Fraction(e, p - 1)
    results = []
    for e_N in e_N_samples:
        e_N = Fraction(e_N)
        lam_N = e_N * (Fraction(e, p - 1) + Fraction(1, p ** s))
        mu_MN = e_N * m
        # upper estimate of phi_{N_s/K}: mu_N up to lambda_N, then slope 1/e_N
        phi_est = mu_N + max(Fraction(0), mu_MN - lam_N) / e_N
        results.append((phi_est, max(mu_N, phi_est)))
    phi_est, final = results[0]
    if any(r[1] != final for r in results):
        raise AssertionError(f"proof chain depends on e_N: {[r[1] for r in results]}")
    main = mu_bound_main(p, e, i)
    if final != main:
        raise AssertionError(f"proof chain gives {final}, closed form gives {main}")
    trace = {"s": s, "m": m, "mu_N": mu_N,
             "phi_estimate": mu_N + m - Fraction(e, p - 1) - Fraction(1, p ** s),
             "result": final}
    return final, trace


@dataclass(frozen=True)
class BaseField:
    """Constants of a named base field for Caruso's bound."""

    name: str
    e: int
    c0: Fraction
    s0: int
    source: str


def kummer_constants(p: int, n: int) -> BaseField:
    """Q_p(p^{1/p^n}): e = p^n, s0 = 1, c0 = n p^n (shipped constants, no break data)."""
    return BaseField(f"kummer:{p}:{n}", p ** n, Fraction(n * p ** n), 1, "shipped constants")


def named_field(spec: str) -> BaseField:
    """``qp``, ``cyclotomic:p:n`` or ``kummer:p:n``."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "qp" and len(parts) == 1:
        return BaseField("qp", 1, Fraction(0), 1, "unramified base")
    if kind in ("cyclotomic", "kummer") and len(parts) == 3:
        try:
            p, n = int(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"bad field {spec!r}") from None
        if n < 1:
            raise ValueError("n must be positive")
        if kind == "kummer":
            return kummer_constants(p, n)
        e = (p - 1) * p ** (n - 1)
        c0 = c0_of(herbrand_psi(herbrand_phi(cyclotomic_breaks(p, n))), e)
        return BaseField(spec, e, c0, n, "Herbrand engine")
    raise ValueError(f"unknown field {spec!r}; expected qp, cyclotomic:p:n or kummer:p:n")


def compare_table(p: int, e: int, i: int, caruso_inputs: tuple | None = None) -> list:
    """Rows in the order Main, CarusoLiu, Caruso, Hattori, FontaineAbrashkin."""
    comp = alpha_beta(p, e, i)
    c0, s0 = caruso_inputs if caruso_inputs else (None, None)
    return [
        BoundResult("Main", mu_bound_main(p, e, i), True, "", comp),
        caruso_liu_bound(p, e, i),
        caruso_bound(p, e, i, c0, s0),
        hattori_bound(p, e, i),
        fontaine_abrashkin_bound(p, i, e),
    ]


def example_diff_cyclotomic(p: int, n: int, i: int) -> tuple:
    """Caruso minus main over Q_p(zeta_{p^n}); returns (difference, (n-1)e, exceeds)."""
    if n < 2 or i < 2:
        raise ValueError("need n >= 2 and i > 1")
    e = (p - 1) * p ** (n - 1)
    c0 = cyclotomic_c0_formula(p, n)
    caruso = caruso_bound(p, e, i, c0, n).value
    diff = caruso - mu_bound_main(p, e, i)
    threshold = (n - 1) * e
    exceeds = diff > threshold
    if not exceeds:
        raise AssertionError(f"difference {diff} does not exceed {threshold}")
    return diff, threshold, exceeds


@dataclass
class InvariantReport:
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def as_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": {k: {"ok": ok, "detail": d} for k, (ok, d) in self.checks.items()},
                "notes": list(self.notes)}


def check_invariants(p: int, e: int, i: int) -> InvariantReport:
    """Equalities and inequalities that must hold at (p, e, i)."""
    rep = InvariantReport()
    main = mu_bound_main(p, e, i)
    comp = alpha_beta(p, e, i)
    hat = hattori_bound(p, e, i)
    if hat.applicable:
        rep.checks["hattori_equal"] = (hat.value == main, f"{hat.value} vs {main}")
    if (i - 1) * e <= i * p:
        cl = caruso_liu_bound(p, e, i).value
        rep.checks["caruso_liu_equal"] = (cl == main, f"{cl} vs {main}")
    if i == 1:
        rep.checks["beta_i1"] = (comp.beta <= Fraction(e, p - 1), str(comp.beta))
    else:
        rep.checks["beta_footnote"] = (comp.beta < min(e, 2 * p), str(comp.beta))
    final, _ = assemble_final_bound(p, e, i)
    rep.checks["proof_chain"] = (final == main, str(final))
    rep.checks["different_le_mu"] = (different_bound_main(p, e, i) <= main, "")
    for case, value, dom in simplified_bounds(p, e, i):
        if case == "e>p" and e > p * (p - 1):
            rep.notes.append(f"simplified e>p bound {value} vs main {main}: "
                             "not checked, e/(p-1) exceeds p")
            continue
        rep.checks[f"simplified_{case}"] = (dom, f"{value} vs main {main}")
    return rep
