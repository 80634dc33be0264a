"""Exact Herbrand functions in the shifted lower/upper numbering.

Indexing: G_(lambda) = {g : v_M(g(x) - x) >= lambda for all x in O_M}, which
is Serre's G_{lambda - 1}; upper numbering satisfies G^(mu) = G^{Serre, mu-1}.
With this normalisation

    phi(t) = integral_0^t |G_(s)| / |G_(1)| ds        (slope capped at 1)

so phi(t) = t on (0, 1] and phi(t) = phi_Serre(t - 1) + 1 beyond.
All coordinates are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "BreakError",
    "RamBreaks",
    "HerbrandFn",
    "herbrand_phi",
    "herbrand_psi",
    "cyclotomic_breaks",
    "convert_convention",
    "transitivity_mu",
    "c0_of",
    "cyclotomic_c0_formula",
    "serre_phi",
    "mu_lambda",
]


class BreakError(ValueError):
    """Malformed ramification data or a non-invertible function."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        raise BreakError("floating-point break data is not accepted; use integers or 'a/b'")
    raise BreakError(f"cannot read {x!r} as a rational")


@dataclass(frozen=True)
class RamBreaks:
    """Lower filtration: ``|G_(l)| = order_j`` for ``l`` in ``(lambda_{j-1}, lambda_j]``.

    The first segment starts at 0; beyond the last break the group is
    trivial.  An empty list is the trivial group.
    """

    breaks: tuple

    def __post_init__(self):
        data = tuple((_frac(lam), int(order)) for lam, order in self.breaks)
        prev_l, prev_o = Fraction(0), None
        for lam, order in data:
            if lam <= prev_l:
                raise BreakError(f"breaks must be positive and strictly increasing (at {lam})")
            if order < 2:
                raise BreakError("every listed order must exceed 1; the trivial tail is implicit")
            if prev_o is not None and (order >= prev_o or prev_o % order):
                raise BreakError(f"order {order} must be a proper divisor of {prev_o}")
            prev_l, prev_o = lam, order
        object.__setattr__(self, "breaks", data)

    @classmethod
    def from_json(cls, text: str) -> "RamBreaks":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BreakError(f"break data is not valid JSON: {exc}") from None
        if not isinstance(raw, list) or any(not isinstance(b, list) or len(b) != 2 for b in raw):
            raise BreakError("break data must be a list of [lambda, order] pairs")
        return cls(tuple((lam, order) for lam, order in raw))

    @property
    def group_order(self) -> int:
        return self.breaks[0][1] if self.breaks else 1

    def order_at(self, lam) -> int:
        """|G_(lam)| for lam > 0."""
        lam = _frac(lam)
        if lam <= 0:
            return self.group_order
        for b, order in self.breaks:
            if lam <= b:
                return order
        return 1

    @property
    def last_break(self) -> Fraction:
        """lambda_{M/F}: the last lower break (0 for the trivial group)."""
        return self.breaks[-1][0] if self.breaks else Fraction(0)

    def as_list(self) -> list:
        return [[str(lam), order] for lam, order in self.breaks]


@dataclass(frozen=True)
class HerbrandFn:
    """Continuous increasing piecewise-linear map with exact breakpoints.

    ``points[0]`` is (0, 0); ``slopes[j]`` applies on ``[x_j, x_{j+1}]`` and
    the last slope continues to infinity.
    """

    points: tuple
    slopes: tuple
    kind: str = "phi"

    def __post_init__(self):
        if not self.points or self.points[0] != (0, 0):
            raise BreakError("Herbrand functions start at the origin")
        if len(self.slopes) != len(self.points):
            raise BreakError("need one slope per breakpoint")
        if any(s <= 0 for s in self.slopes):
            raise BreakError("function must be strictly increasing")
        for (x0, y0), (x1, y1), s in zip(self.points, self.points[1:], self.slopes):
            if x1 <= x0 or y1 - y0 != s * (x1 - x0):
                raise BreakError("breakpoints inconsistent with slopes")

    def __call__(self, t) -> Fraction:
        t = _frac(t)
        if t < 0:
            raise BreakError("Herbrand functions are evaluated at t >= 0")
        xs = [x for x, _ in self.points]
        j = bisect_right(xs, t) - 1
        x, y = self.points[j]
        return y + self.slopes[j] * (t - x)

    @property
    def final_slope(self) -> Fraction:
        return self.slopes[-1]

    def is_concave(self) -> bool:
        return all(a >= b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def as_dict(self) -> dict:
        return {"kind": self.kind,
                "points": [[str(x), str(y)] for x, y in self.points],
                "slopes": [str(s) for s in self.slopes]}


def herbrand_phi(breaks: RamBreaks) -> HerbrandFn:
    """phi(t) = integral of min(1, |G_(s)| / |G_(1)|) from 0 to t."""
    g1 = breaks.order_at(1)
    segs = [(lam, min(Fraction(1), Fraction(order, g1))) for lam, order in breaks.breaks]
    segs.append((None, Fraction(1, g1)))
    merged = []
    for end, slope in segs:
        if merged and merged[-1][1] == slope:
            merged[-1] = (end, slope)
        else:
            merged.append((end, slope))
    points = [(Fraction(0), Fraction(0))]
    slopes = []
    x = y = Fraction(0)
    for end, slope in merged:
        slopes.append(slope)
        if end is not None:
            y += slope * (end - x)
            x = end
            points.append((x, y))
    return HerbrandFn(tuple(points), tuple(slopes), "phi")


def herbrand_psi(fn: HerbrandFn) -> HerbrandFn:
    """Exact inverse: swap coordinates and invert slopes."""
    if any(s <= 0 for s in fn.slopes):
        raise BreakError("function is not invertible")
    kind = "psi" if fn.kind == "phi" else "phi"
    return HerbrandFn(tuple((y, x) for x, y in fn.points),
                      tuple(1 / s for s in fn.slopes), kind)


def serre_phi(breaks: RamBreaks, u) -> Fraction:
    """Serre's phi_{M/F}(u) = integral_0^u ds / (G_0 : G_s), Serre indexing.

    Independent evaluation used to cross-check the shifted engine; the
    Serre filtration group G_s equals G_(s+1) here.
    """
    u = _frac(u)
    g0 = breaks.order_at(1)
    if u <= 0:
        return u
    total = Fraction(0)
    lo = Fraction(0)
    # Serre breaks are lambda - 1
    for lam, order in list(breaks.breaks) + [(None, 1)]:
        hi = None if lam is None else lam - 1
        if hi is not None and hi <= 0:
            continue
        top = u if hi is None else min(u, hi)
        if top > lo:
            total += Fraction(order, g0) * (top - lo)
            lo = top
        if hi is None or u <= hi:
            break
    return total


def cyclotomic_breaks(p: int, n: int) -> RamBreaks:
    """Gal(Q_p(zeta_{p^n})/Q_p): order (p-1)p^{n-1} on (0,1], p^{n-k} on (p^{k-1}, p^k]."""
    if n < 1:
        raise BreakError("n must be at least 1")
    data = [(Fraction(1), (p - 1) * p ** (n - 1))]
    for k in range(1, n):
        data.append((Fraction(p ** k), p ** (n - k)))
    if data[0][1] == 1:
        data = data[1:]
    return RamBreaks(tuple(data))


def cyclotomic_c0_formula(p: int, n: int) -> int:
    """[(n-1)(p-1) - 1] p^{n-1} + 1."""
    return ((n - 1) * (p - 1) - 1) * p ** (n - 1) + 1


_UPPER = ("paper-upper", "serre-upper", "fontaine-upper")
_LOWER = ("paper-lower", "serre-lower", "fontaine-lower")


def convert_convention(value, src: str, dst: str, e_tilde=None) -> Fraction:
    """Translate a filtration index between conventions.

    G^(mu) = G^{Serre, mu-1} = G^{Fontaine, mu} and
    G_(lam) = G_{Serre, lam-1} = G_{Fontaine, lam / e_tilde}.
    """
    value = _frac(value)
    if src in _UPPER and dst in _UPPER:
        shifted = {"paper-upper": value, "serre-upper": value + 1, "fontaine-upper": value}[src]
        return {"paper-upper": shifted, "serre-upper": shifted - 1,
                "fontaine-upper": shifted}[dst]
    if src in _LOWER and dst in _LOWER:
        if "fontaine-lower" in (src, dst) and src != dst:
            if e_tilde is None:
                raise BreakError("Fontaine lower numbering needs e_tilde")
            e_tilde = _frac(e_tilde)
        if src == "paper-lower":
            shifted = value
        elif src == "serre-lower":
            shifted = value + 1
        else:
            shifted = value * e_tilde if src != dst else value
        if dst == "paper-lower":
            return shifted
        if dst == "serre-lower":
            return shifted - 1
        return shifted / e_tilde if src != dst else value
    raise BreakError(f"cannot convert between {src!r} and {dst!r}")


def transitivity_mu(mu_MF, phi_MF: HerbrandFn, mu_NM) -> Fraction:
    """mu_{N/F} = max(mu_{M/F}, phi_{M/F}(mu_{N/M}))."""
    return max(_frac(mu_MF), phi_MF(mu_NM))


def c0_of(psi: HerbrandFn, e: int) -> Fraction:
    """Least c >= 0 with psi(1 + t) >= 1 + e t - c for all t >= 0."""
    if psi.final_slope != e:
        raise BreakError(f"final slope of psi is {psi.final_slope}, not e={e}; no finite c exists")
    candidates = [Fraction(0)] + [x - 1 for x, _ in psi.points if x >= 1]
    best = max(1 + e * t - psi(1 + t) for t in candidates)
    return max(best, Fraction(0))


def mu_lambda(breaks: RamBreaks) -> tuple:
    """(lambda_{M/F}, mu_{M/F}) = (last lower break, its image under phi)."""
    lam = breaks.last_break
    return lam, herbrand_phi(breaks)(lam)
