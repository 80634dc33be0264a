"""Koszul complexes over finite rings Z/p^N[u, w]/(monomials).

The finite ring has the monomial basis left over by the monomial relations
and is a free Z/p^N-module; modules are free of rank ``module_rank``.
Group orders of Koszul homology come from a Smith-type normal form over the
local ring Z/p^N: an m x n matrix with diagonal valuations e_1, ..., e_r has
an image of order prod p^{N - e_i}.

Regularity is tested directly, by exhausting the finite module, so it is an
independent check of the homological criterion.  Note that on a finite
module every element of the maximal ideal (p, u, w) is nilpotent, so the
only regular sequences there are empty; the equivalences below are
exercised as stated, degenerate or not.
"""

from __future__ import annotations

import itertools
import random
import re
import time
from dataclasses import dataclass, field
from math import comb

from prismcheck.polyring import (
    CoeffDomain,
    MPoly,
    PolyError,
    exact_divide,
    divide_by_p,
    is_prime,
    parse_poly,
)

__all__ = [
    "FiniteRingSpec",
    "KoszulComplex",
    "HomologyReport",
    "build_koszul",
    "koszul_homology",
    "brute_force_homology",
    "image_log_order",
    "check_perm_invariance",
    "RegularityReport",
    "check_reg_iff_h1",
    "is_regular_exhaustive",
    "random_sequence",
    "DisjointnessReport",
    "disjointness_property",
    "FIXED_INSTANCES",
    "KoszulCellReport",
    "run_koszul_instance",
]


class FiniteRingError(PolyError):
    """Relations do not cut out a finite ring, or an element does not live in it."""


@dataclass(frozen=True)
class FiniteRingSpec:
    """Z/p^N[vars] modulo monomial relations, each given as exponent dict."""

    p: int
    N: int
    relations: tuple = ()

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise FiniteRingError(f"p must be an odd prime, got {self.p}")
        if self.N < 1:
            raise FiniteRingError("N must be positive")
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = parse_poly(r)
            if isinstance(r, MPoly):
                if len(r) != 1 or r.coefficients() != [1]:
                    raise FiniteRingError(f"relation {r} is not a monic monomial")
                r = r.monomials()[0]
            rels.append(tuple(sorted(dict(r).items())))
        object.__setattr__(self, "relations", tuple(rels))

    @classmethod
    def parse(cls, text: str) -> "FiniteRingSpec":
        """Parse ``Z/9``, ``Z/3[u]/(u^2)`` or ``Z/9[u,w]/(u^3, w^2, u*w)``."""
        m = re.fullmatch(r"\s*Z/(\d+)(?:\^(\d+))?\s*(?:\[([^\]]*)\]\s*(?:/\s*\(([^)]*)\))?)?\s*", text)
        if not m:
            raise FiniteRingError(f"cannot parse ring {text!r}")
        modulus = int(m.group(1))
        if m.group(2):
            p, N = modulus, int(m.group(2))
        else:
            p, N = _prime_power(modulus)
        rels = [r for r in (m.group(4) or "").split(",") if r.strip()]
        spec = cls(p, N, tuple(rels))
        declared = [v.strip() for v in (m.group(3) or "").split(",") if v.strip()]
        missing = set(declared) - set(spec.variables)
        if missing:
            raise FiniteRingError(f"variables {sorted(missing)} have no nilpotence relation")
        return spec

    @property
    def domain(self) -> CoeffDomain:
        return CoeffDomain(self.p, self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def variables(self) -> tuple:
        names = sorted({v for r in self.relations for v, _ in r},
                       key=lambda v: (v != "u", v != "w", v))
        return tuple(names)

    def bounds(self) -> dict:
        out = {}
        for r in self.relations:
            if len(r) == 1:
                (v, x), = r
                out[v] = min(out.get(v, x), x)
        for v in self.variables:
            if v not in out:
                raise FiniteRingError(f"no relation {v}^k = 0; the ring would be infinite")
        return out

    def _killed(self, mono: dict) -> bool:
        return any(all(mono.get(v, 0) >= x for v, x in r) for r in self.relations)

    def basis(self) -> list:
        """Surviving monomials as exponent tuples over :attr:`variables`."""
        bnd = self.bounds()
        names = self.variables
        out = []
        for e in itertools.product(*(range(bnd[v]) for v in names)):
            if not self._killed(dict(zip(names, e))):
                out.append(e)
        return out

    def dim(self) -> int:
        return len(self.basis())

    def order(self) -> int:
        return self.modulus ** self.dim()

    def vector(self, f) -> list:
        """Coordinates of ``f`` (int, text or polynomial) in the monomial basis."""
        if isinstance(f, str):
            f = parse_poly(f)
        if isinstance(f, int):
            f = MPoly.const(f)
        extra = set(f.gens) - set(self.variables)
        if extra:
            raise FiniteRingError(f"element {f} uses variables {sorted(extra)} outside the ring")
        index = {e: k for k, e in enumerate(self.basis())}
        vec = [0] * len(index)
        names = self.variables
        for mono, c in zip(f.monomials(), f.coefficients()):
            e = tuple(mono.get(v, 0) for v in names)
            if e in index:
                vec[index[e]] = (vec[index[e]] + c) % self.modulus
            elif not self._killed(mono):
                raise FiniteRingError(f"monomial {mono} neither in basis nor killed")
        return vec

    def mult_matrix(self, f) -> list:
        """Matrix of multiplication by ``f`` on the monomial basis (columns = inputs)."""
        vec = self.vector(f)
        basis = self.basis()
        index = {e: k for k, e in enumerate(basis)}
        names = self.variables
        n = len(basis)
        mat = [[0] * n for _ in range(n)]
        for col, b in enumerate(basis):
            for k, c in enumerate(vec):
                if not c:
                    continue
                e = tuple(x + y for x, y in zip(basis[k], b))
                row = index.get(e)
                if row is None:
                    if not self._killed(dict(zip(names, e))):
                        raise FiniteRingError("product escaped the monomial basis")
                    continue
                mat[row][col] = (mat[row][col] + c) % self.modulus
        return mat

    def __str__(self):
        mod = f"Z/{self.modulus}"
        if not self.relations:
            return mod
        rels = ", ".join("*".join(v if x == 1 else f"{v}^{x}" for v, x in r) for r in self.relations)
        return f"{mod}[{','.join(self.variables)}]/({rels})"


def _prime_power(m: int) -> tuple:
    for p in range(3, m + 1, 2):
        if m % p == 0:
            N = 0
            while m % p == 0:
                m //= p
                N += 1
            if m != 1 or not is_prime(p):
                break
            return p, N
    raise FiniteRingError("modulus must be a power of an odd prime")


# -- linear algebra over Z/p^N ------------------------------------------------


def _val(x: int, p: int, N: int) -> int:
    if x == 0:
        return N
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def smith_valuations(mat: list, p: int, N: int) -> list:
    """Valuations of the diagonal of a Smith form of ``mat`` over Z/p^N.

    The pivot is always an entry of least valuation in the remaining block,
    so every other entry of its row and column is a multiple of it and can be
    cleared without division by a non-unit.
    """
    mod = p ** N
    A = [[x % mod for x in row] for row in mat]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    r = 0
    while r < min(rows, cols):
        best = None
        for i in range(r, rows):
            for j in range(r, cols):
                if A[i][j]:
                    v = _val(A[i][j], p, N)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[r], A[i] = A[i], A[r]
        for row in A:
            row[r], row[j] = row[j], row[r]
        pv = p ** v
        inv = pow(A[r][r] // pv, -1, mod)
        for i in range(r + 1, rows):
            if A[i][r]:
                f = (A[i][r] // pv) * inv % mod
                Ai, Ar = A[i], A[r]
                for j in range(r, cols):
                    Ai[j] = (Ai[j] - f * Ar[j]) % mod
        for j in range(r + 1, cols):
            if A[r][j]:
                f = (A[r][j] // pv) * inv % mod
                for i in range(r, rows):
                    A[i][j] = (A[i][j] - f * A[i][r]) % mod
        diag.append(v)
        r += 1
    return diag


def image_log_order(mat: list, p: int, N: int) -> int:
    """log_p of the order of the column span of ``mat`` in (Z/p^N)^rows."""
    if not mat or not mat[0]:
        return 0
    return sum(N - v for v in smith_valuations(mat, p, N))


def _matmul(A, B, mod):
    if not A or not B or not B[0]:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % mod for col in Bt] for row in A]


# -- Koszul complexes -----------------------------------------------------------


@dataclass
class KoszulComplex:
    """Kos(R^rank; f_1..f_n) with boundary matrices ``d[m]: K_m -> K_{m-1}``."""

    spec: FiniteRingSpec
    seq: tuple
    rank: int
    dims: list
    d: dict

    @property
    def n(self) -> int:
        return len(self.seq)


def build_koszul(spec: FiniteRingSpec, seq, module_rank: int = 1) -> KoszulComplex:
    seq = tuple(parse_poly(f) if isinstance(f, str) else (MPoly.const(f) if isinstance(f, int) else f)
                for f in seq)
    n = len(seq)
    mod = spec.modulus
    base = spec.dim() * module_rank
    mults = [spec.mult_matrix(f) for f in seq]
    subsets = {m: list(itertools.combinations(range(n), m)) for m in range(n + 1)}
    dims = [comb(n, m) * base for m in range(n + 1)]
    d = {}
    for m in range(1, n + 1):
        target = {S: k for k, S in enumerate(subsets[m - 1])}
        mat = [[0] * dims[m] for _ in range(dims[m - 1])]
        for col_s, S in enumerate(subsets[m]):
            for pos, j in enumerate(S):
                sign = -1 if pos % 2 else 1
                row_s = target[S[:pos] + S[pos + 1:]]
                M = mults[j]
                dimR = len(M)
                for r in range(module_rank):
                    for a in range(dimR):
                        row = row_s * base + r * dimR + a
                        for b in range(dimR):
                            if M[a][b]:
                                col = col_s * base + r * dimR + b
                                mat[row][col] = (mat[row][col] + sign * M[a][b]) % mod
        d[m] = mat
    for m in range(2, n + 1):
        prod = _matmul(d[m - 1], d[m], mod)
        if any(any(row) for row in prod):
            raise AssertionError(f"d_{m - 1} o d_{m} is not zero")
    return KoszulComplex(spec, seq, module_rank, dims, d)


@dataclass
class HomologyReport:
    """log_p |H_m| for m = 0..n; orders are ``p ** log``."""

    p: int
    logs: list

    @property
    def orders(self) -> list:
        return [self.p ** x for x in self.logs]

    def vanishes_above(self, m: int = 0) -> bool:
        return all(x == 0 for x in self.logs[m + 1:])

    def as_dict(self) -> dict:
        return {"homology_orders": {str(m): o for m, o in enumerate(self.orders)}}


def koszul_homology(cx: KoszulComplex) -> HomologyReport:
    p, N = cx.spec.p, cx.spec.N
    img = {m: image_log_order(cx.d[m], p, N) for m in cx.d}
    logs = []
    for m in range(cx.n + 1):
        kernel = N * cx.dims[m] - img.get(m, 0)
        logs.append(kernel - img.get(m + 1, 0))
    return HomologyReport(p, logs)


def _all_vectors(dim: int, mod: int):
    return itertools.product(range(mod), repeat=dim)


def _apply(mat, vec, mod):
    return tuple(sum(a * b for a, b in zip(row, vec)) % mod for row in mat)


def brute_force_homology(cx: KoszulComplex, limit: int = 200_000) -> HomologyReport:
    """Homology orders by enumerating every vector of every term.

    Raises :class:`FiniteRingError` if some term has more than ``limit``
    elements.
    """
    mod = cx.spec.modulus
    p = cx.spec.p
    for dim in cx.dims:
        if mod ** dim > limit:
            raise FiniteRingError(f"term of order {mod}^{dim} exceeds brute-force limit")
    logs = []
    for m in range(cx.n + 1):
        dim = cx.dims[m]
        if m in cx.d:
            zero = tuple([0] * cx.dims[m - 1])
            kernel = sum(1 for x in _all_vectors(dim, mod) if _apply(cx.d[m], x, mod) == zero)
        else:
            kernel = mod ** dim
        if m + 1 in cx.d:
            image = len({_apply(cx.d[m + 1], x, mod) for x in _all_vectors(cx.dims[m + 1], mod)})
        else:
            image = 1
        order = kernel // image
        logs.append(_exact_log(order, p))
    return HomologyReport(p, logs)


def _exact_log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise AssertionError(f"group order {n} is not a power of {p}")
        n //= p
        k += 1
    return k


def check_perm_invariance(spec: FiniteRingSpec, seq, module_rank: int = 1) -> dict:
    """Homology of every permutation of ``seq``; invariant iff all agree."""
    seq = list(seq)
    if len(seq) > 4:
        raise PolyError("permutation check limited to n <= 4")
    results = {}
    for perm in itertools.permutations(range(len(seq))):
        rep = koszul_homology(build_koszul(spec, [seq[k] for k in perm], module_rank))
        results[perm] = rep.logs
    first = next(iter(results.values()))
    return {"spec": str(spec), "sequence": [str(f) for f in seq],
            "invariant": all(v == first for v in results.values()),
            "homology_logs": first}


# -- regularity by exhaustion --------------------------------------------------


def _span(gens: list, dim: int, mod: int) -> set:
    """Z/p^N-span of integer vectors by closure under addition."""
    span = {tuple([0] * dim)}
    for g in gens:
        g = tuple(x % mod for x in g)
        if not any(g) or g in span:
            continue
        mult = []
        x = g
        while any(x):
            mult.append(x)
            x = tuple((a + b) % mod for a, b in zip(x, g))
        span = {tuple((a + b) % mod for a, b in zip(s, m)) for s in span for m in mult} | span
    return span


def is_regular_exhaustive(spec: FiniteRingSpec, seq, module_rank: int = 1) -> tuple:
    """Return (regular, reason) for ``seq`` on R^rank, deciding by exhaustion.

    Regular means: each f_k is injective on M/(f_1..f_{k-1})M and
    M/(f_1..f_n)M is nonzero.
    """
    mod = spec.modulus
    dimR = spec.dim()
    dim = dimR * module_rank
    mults = []
    for f in seq:
        M = spec.mult_matrix(f)
        big = [[0] * dim for _ in range(dim)]
        for r in range(module_rank):
            for a in range(dimR):
                for b in range(dimR):
                    big[r * dimR + a][r * dimR + b] = M[a][b]
        mults.append(big)
    gens: list = []
    submodule = {tuple([0] * dim)}
    everything = list(_all_vectors(dim, mod))
    for k, F in enumerate(mults):
        for x in everything:
            if x in submodule:
                continue
            if _apply(F, x, mod) in submodule:
                return False, f"f_{k + 1} is a zero divisor on the quotient (witness {x})"
        cols = list(zip(*F))
        gens.extend(cols)
        submodule = _span(gens, dim, mod)
    if len(submodule) == mod ** dim:
        return False, "final quotient is zero"
    return True, "regular"


@dataclass
class RegularityReport:
    spec: str
    p: int
    sequence: list
    regular: bool
    reason: str
    homology_logs: list
    h1_zero: bool
    all_higher_zero: bool
    hypothesis: bool
    agreement: bool

    @property
    def verdict(self) -> str:
        if not self.hypothesis:
            return "pass" if self.h1_zero == self.all_higher_zero else "fail"
        return "pass" if self.agreement else "fail"

    def as_dict(self) -> dict:
        return {"spec": self.spec, "sequence": self.sequence,
                "homology_orders": {str(m): self.p ** x for m, x in enumerate(self.homology_logs)},
                "regular": self.regular, "reason": self.reason,
                "hypothesis_in_maximal_ideal": self.hypothesis,
                "verdict": self.verdict}


def in_maximal_ideal(spec: FiniteRingSpec, f) -> bool:
    """f lies in (p, u, w, ...) iff its constant coefficient is divisible by p."""
    vec = spec.vector(f)
    basis = spec.basis()
    const = basis.index(tuple([0] * len(spec.variables)))
    return vec[const] % spec.p == 0


def check_reg_iff_h1(spec: FiniteRingSpec, seq, module_rank: int = 1) -> RegularityReport:
    """Compare exhaustive regularity with vanishing of H_1 and of all H_m, m >= 1.

    The equivalence is asserted when every f_k lies in the maximal ideal
    (the completeness hypothesis on a finite module).  Outside it only
    H_1 = 0 <=> H_{>=1} = 0 is required; a unit makes the final quotient
    vanish while all homology is zero.
    """
    seq = [parse_poly(f) if isinstance(f, str) else (MPoly.const(f) if isinstance(f, int) else f)
           for f in seq]
    regular, reason = is_regular_exhaustive(spec, seq, module_rank)
    hom = koszul_homology(build_koszul(spec, seq, module_rank))
    h1 = len(hom.logs) < 2 or hom.logs[1] == 0
    higher = hom.vanishes_above(0)
    hyp = all(in_maximal_ideal(spec, f) for f in seq)
    agree = regular == h1 == higher
    return RegularityReport(str(spec), spec.p, [str(f) for f in seq], regular, reason, hom.logs,
                            h1, higher, hyp, agree)


def random_sequence(rng: random.Random, spec: FiniteRingSpec, n: int, in_max: bool = True) -> list:
    """Random elements of the finite ring (of its maximal ideal by default)."""
    names = spec.variables
    basis = spec.basis()
    out = []
    for _ in range(n):
        terms = {}
        for e in basis:
            c = rng.randrange(spec.modulus)
            if in_max and not any(e):
                c = (c // spec.p) * spec.p
            if c:
                terms[e] = c
        out.append(MPoly(terms, names) if names else MPoly.const(terms.get((), 0)))
    return out


# -- p^k A cap x^l A = p^k x^l A in Z[u, w] ----------------------------------------


@dataclass
class DisjointnessReport:
    x: str
    p: int
    k: int
    l: int
    trials: int
    seed: int
    positive_ok: bool = True
    negative_ok: bool = True
    failures: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if self.positive_ok and self.negative_ok else "fail"

    def as_dict(self) -> dict:
        return {"x": self.x, "p": self.p, "k": self.k, "l": self.l, "trials": self.trials,
                "seed": self.seed, "positive_ok": self.positive_ok,
                "negative_ok": self.negative_ok, "failures": self.failures,
                "verdict": self.verdict}


def named_element(name: str, p: int, E: MPoly | None = None) -> MPoly:
    """u, w, v = (1+w)^p - 1, omega = v / w, or E (the supplied Eisenstein polynomial)."""
    w = MPoly.var("w")
    if name == "u":
        return MPoly.var("u")
    if name == "w":
        return w
    if name == "v":
        return (w + 1) ** p - 1
    if name == "omega":
        return sum(((w + 1) ** j for j in range(1, p)), MPoly.const(1))
    if name == "E":
        if E is None:
            raise PolyError("E requires an Eisenstein polynomial")
        return E
    raise PolyError(f"unknown element {name!r}")


def _divides(x: MPoly, a: MPoly) -> bool:
    return exact_divide(a, x).divisible


def _divisible_by_pk(a: MPoly, p: int, k: int) -> bool:
    try:
        divide_by_p(a, k, p)
        return True
    except PolyError:
        return False


def disjointness_property(x, k: int, l: int, trials: int = 20, p: int = 3, seed: int = 0,
                          E: MPoly | None = None, deg: int = 3) -> DisjointnessReport:
    """Model-ring analogue of p^k A cap x^l A = p^k x^l A.

    Positive trials build a = p^k x^l r and confirm all three divisibilities.
    Negative trials build a = p^k r with x not dividing r (checked) and
    confirm that x^l does not divide a.
    """
    from prismcheck.prism import random_poly

    name = x if isinstance(x, str) else str(x)
    xe = named_element(x, p, E) if isinstance(x, str) else x
    rng = random.Random(seed)
    rep = DisjointnessReport(name, p, k, l, trials, seed)
    start = time.perf_counter()
    pk = p ** k
    xl = xe ** l
    for t in range(trials):
        r = MPoly.const(0)
        while r.is_zero():
            r = random_poly(rng, ("u", "w"), deg, 4, bound=20)
        a = pk * xl * r
        if not (_divisible_by_pk(a, p, k) and _divides(xl, a) and _divides(pk * xl, a)):
            rep.positive_ok = False
            rep.failures.append(f"positive trial {t}: r={r}")
        while _divides(xe, r):
            r = r + rng.randint(1, 5)
        a = pk * r
        if _divides(xl, a):
            rep.negative_ok = False
            rep.failures.append(f"negative trial {t}: r={r}")
    rep.elapsed_ms = (time.perf_counter() - start) * 1000
    return rep


# -- the fixed instance suite --------------------------------------------------

FIXED_INSTANCES = (
    ("Z/9", ("3",)),
    ("Z/9", ("1",)),
    ("Z/9", ("2",)),
    ("Z/27", ("3",)),
    ("Z/27", ("9", "3")),
    ("Z/3[u]/(u^2)", ("u", "u")),
    ("Z/3[u]/(u^3)", ("u",)),
    ("Z/9[u]/(u^3)", ("3", "u")),
    ("Z/9[u]/(u^2)", ("3", "u")),
    ("Z/9[u]/(u^2)", ("3", "u", "3*u")),
    ("Z/3[u,w]/(u^2,w^2)", ("u", "w")),
    ("Z/3[u,w]/(u^2,w^2)", ("u+w", "u*w")),
    ("Z/5[u]/(u^2)", ("u", "5", "1+u")),
)


@dataclass
class KoszulCellReport:
    """Regularity agreement, permutation invariance and (optionally) brute force."""

    regularity: RegularityReport
    permutation_invariant: bool
    brute_force_logs: list | None
    ring_order: int

    @property
    def brute_force_ok(self) -> bool:
        return self.brute_force_logs is None or self.brute_force_logs == self.regularity.homology_logs

    @property
    def verdict(self) -> str:
        ok = self.regularity.verdict == "pass" and self.permutation_invariant and self.brute_force_ok
        return "pass" if ok else "fail"

    def as_dict(self) -> dict:
        out = self.regularity.as_dict()
        out["ring_order"] = self.ring_order
        out["permutation_invariant"] = self.permutation_invariant
        out["brute_force"] = (None if self.brute_force_logs is None
                              else {"agrees": self.brute_force_ok,
                                    "homology_orders": {str(m): self.regularity.p ** x
                                                        for m, x in enumerate(self.brute_force_logs)}})
        out["verdict"] = self.verdict
        return out


def run_koszul_instance(spec, seq, module_rank: int = 1, brute_ring_limit: int = 81,
                        brute_term_limit: int = 200_000) -> KoszulCellReport:
    """All Koszul checks on one (ring, sequence).

    The brute-force oracle runs when the ring has at most ``brute_ring_limit``
    elements and every Koszul term at most ``brute_term_limit``.
    """
    if isinstance(spec, str):
        spec = FiniteRingSpec.parse(spec)
    seq = [parse_poly(f) if isinstance(f, str) else f for f in seq]
    reg = check_reg_iff_h1(spec, seq, module_rank)
    perm = check_perm_invariance(spec, seq, module_rank)["invariant"] if len(seq) <= 4 else True
    order = spec.order() ** module_rank
    cx = build_koszul(spec, seq, module_rank)
    brute = None
    if order <= brute_ring_limit and max(spec.modulus ** d for d in cx.dims) <= brute_term_limit:
        brute = brute_force_homology(cx, brute_term_limit).logs
    return KoszulCellReport(reg, perm, brute, order)
