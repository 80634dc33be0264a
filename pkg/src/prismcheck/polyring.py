"""Exact sparse multivariate polynomials over Z and Z/p^N.

Every object of the verification layer is an element of Z[u, w, ...]: ``u``
models the Teichmüller lift of the chosen compatible system of roots of the
uniformizer, ``w`` models phi^{-1}(v), and further symbols are auxiliary.
Values are immutable; all operations return new polynomials.

Text format::

    u^4 - 3*u + 9*w^2

Canonical term order is lexicographic with ``u > w > x1 > x2 > ...``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from prismcheck import _kernel

__all__ = [
    "CoeffDomain",
    "ZZ",
    "MPoly",
    "DivResult",
    "PolyError",
    "DomainMismatchError",
    "NotDivisibleByPError",
    "PolyParseError",
    "is_prime",
    "poly_arith",
    "substitute",
    "exact_divide",
    "divide_by_p",
    "u_valuation",
    "reduce_mod_pn",
    "parse_poly",
]


class PolyError(ValueError):
    """Base class for polynomial-layer errors."""


class DomainMismatchError(PolyError):
    """Operands live over different coefficient domains."""


class NotDivisibleByPError(PolyError):
    """A coefficient is not divisible by the requested power of p."""


class PolyParseError(PolyError):
    """Malformed polynomial text."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoeffDomain:
    """Coefficient ring: the integers, or Z/p^N for an odd prime p."""

    p: int | None = None
    N: int | None = None

    def __post_init__(self):
        if self.p is None:
            if self.N is not None:
                raise PolyError("precision given without a prime")
            return
        if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
            raise PolyError(f"p must be an odd prime, got {self.p}")
        if not isinstance(self.N, int) or self.N < 1:
            raise PolyError(f"precision N must be a positive integer, got {self.N}")

    @classmethod
    def residue(cls, p: int, N: int) -> "CoeffDomain":
        return cls(p, N)

    @property
    def is_exact(self) -> bool:
        return self.p is None

    @property
    def modulus(self) -> int | None:
        return None if self.p is None else self.p ** self.N

    def __str__(self):
        return "ZZ" if self.p is None else f"Z/{self.p}^{self.N}"


ZZ = CoeffDomain()

Coercible = Union["MPoly", int]

_NAT = re.compile(r"(\d+)")


def _var_key(name: str):
    if name == "u":
        return (0, ())
    if name == "w":
        return (1, ())
    parts = tuple((0, int(t)) if t.isdigit() else (1, t) for t in _NAT.split(name) if t)
    return (2, parts)


class MPoly:
    """Immutable sparse polynomial.

    ``gens`` is the tuple of variables that actually occur, in canonical
    order; ``terms`` maps exponent tuples over ``gens`` to nonzero
    coefficients.  Two polynomials are equal iff domain, generators and term
    maps coincide, which the normalisation in the constructor guarantees for
    equal values.
    """

    __slots__ = ("domain", "gens", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None, gens: Iterable[str] = (),
                 domain: CoeffDomain = ZZ):
        gens = tuple(gens)
        terms = dict(terms or {})
        mod = domain.modulus
        if mod is not None:
            terms = {e: c % mod for e, c in terms.items()}
        terms = {e: c for e, c in terms.items() if c}
        for e in terms:
            if len(e) != len(gens) or any(x < 0 for x in e):
                raise PolyError(f"bad exponent vector {e} for generators {gens}")
        order = sorted(range(len(gens)), key=lambda i: _var_key(gens[i]))
        if len(set(gens)) != len(gens):
            raise PolyError(f"repeated generator in {gens}")
        used = [i for i in order if any(e[i] for e in terms)]
        if used != list(range(len(gens))):
            gens = tuple(gens[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self.domain = domain
        self.gens = gens
        self._terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, gens: tuple, domain: CoeffDomain) -> "MPoly":
        """Build from already-normalised data, trimming unused generators."""
        obj = cls.__new__(cls)
        obj.domain = domain
        if gens and terms:
            used = [i for i in range(len(gens)) if any(e[i] for e in terms)]
            if len(used) != len(gens):
                gens = tuple(gens[i] for i in used)
                terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        elif not terms:
            gens = ()
        obj.gens = gens
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: int, domain: CoeffDomain = ZZ) -> "MPoly":
        if not isinstance(c, int):
            raise TypeError(f"integer constant expected, got {type(c).__name__}")
        return cls({(): c}, (), domain)

    @classmethod
    def var(cls, name: str, domain: CoeffDomain = ZZ) -> "MPoly":
        return cls({(1,): 1}, (name,), domain)

    @classmethod
    def parse(cls, text: str, domain: CoeffDomain = ZZ) -> "MPoly":
        return parse_poly(text, domain)

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> dict:
        """Copy of the term map, keyed by exponent tuples over ``gens``."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self.gens

    def constant_term(self) -> int:
        return self._terms.get((0,) * len(self.gens), 0)

    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var not in self.gens:
            return 0
        i = self.gens.index(var)
        return max(e[i] for e in self._terms)

    def min_degree(self, var: str) -> float:
        if not self._terms:
            return math.inf
        if var not in self.gens:
            return 0
        i = self.gens.index(var)
        return min(e[i] for e in self._terms)

    def coefficients(self) -> list[int]:
        return list(self._terms.values())

    def monomials(self) -> list[dict[str, int]]:
        return [{g: x for g, x in zip(self.gens, e) if x} for e in self._terms]

    def coeff_by(self, var: str) -> dict[int, "MPoly"]:
        """Split as ``sum_k c_k * var^k``; returns ``{k: c_k}``."""
        if var not in self.gens:
            return {0: self} if self._terms else {}
        i = self.gens.index(var)
        rest = self.gens[:i] + self.gens[i + 1:]
        groups: dict[int, dict] = {}
        for e, c in self._terms.items():
            groups.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MPoly._raw(t, rest, self.domain) for k, t in groups.items()}

    def sorted_terms(self):
        """Terms in canonical (descending lex) order."""
        return sorted(self._terms.items(), reverse=True)

    # -- alignment -----------------------------------------------------

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.domain != self.domain:
                raise DomainMismatchError(f"cannot combine {self.domain} with {other.domain}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return MPoly.const(other, self.domain)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def _embed(self, gens: tuple) -> dict:
        if gens == self.gens:
            return self._terms
        idx = [gens.index(g) for g in self.gens]
        n = len(gens)
        out = {}
        for e, c in self._terms.items():
            v = [0] * n
            for i, x in zip(idx, e):
                v[i] = x
            out[tuple(v)] = c
        return out

    def _align(self, other: "MPoly"):
        if self.gens == other.gens:
            return self.gens, self._terms, other._terms
        gens = tuple(sorted(set(self.gens) | set(other.gens), key=_var_key))
        return gens, self._embed(gens), other._embed(gens)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        gens, ta, tb = self._align(other)
        out = dict(ta)
        mod = self.domain.modulus
        for e, c in tb.items():
            v = out.get(e, 0) + c
            if mod is not None:
                v %= mod
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(out, gens, self.domain)

    __radd__ = __add__

    def __neg__(self):
        mod = self.domain.modulus
        if mod is None:
            return MPoly._raw({e: -c for e, c in self._terms.items()}, self.gens, self.domain)
        return MPoly._raw({e: (-c) % mod for e, c in self._terms.items()}, self.gens, self.domain)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other.is_constant():
            c = other.constant_term()
            if c == 1:
                return self
            mod = self.domain.modulus
            out = {}
            for e, a in self._terms.items():
                v = a * c if mod is None else (a * c) % mod
                if v:
                    out[e] = v
            return MPoly._raw(out, self.gens, self.domain)
        if self.is_constant():
            return other * self
        gens, ta, tb = self._align(other)
        if len(tb) == 1 or len(ta) == 1:
            if len(ta) == 1:
                ta, tb = tb, ta
            (eb, cb), = tb.items()
            mod = self.domain.modulus
            out = {}
            for e, c in ta.items():
                v = c * cb if mod is None else (c * cb) % mod
                if v:
                    out[tuple(x + y for x, y in zip(e, eb))] = v
            return MPoly._raw(out, gens, self.domain)
        return MPoly._raw(_kernel.mul_terms(ta, tb, self.domain.modulus), gens, self.domain)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("exponent must be an integer")
        if n < 0:
            raise PolyError("negative exponent")
        if n == 0:
            return MPoly.const(1, self.domain)
        if n == 1 or not self._terms:
            return self
        mod = self.domain.modulus
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            c = c ** n if mod is None else pow(c, n, mod)
            return MPoly._raw({tuple(x * n for x in e): c} if c else {}, self.gens, self.domain)
        if len(self._terms) == 2:
            return self._binomial_pow(n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _binomial_pow(self, n: int) -> "MPoly":
        (e1, a), (e2, b) = self._terms.items()
        mod = self.domain.modulus
        out: dict = {}
        binom = 1
        # a^(n-k) b^k, walking k upward
        apow = [1] * (n + 1)
        for k in range(1, n + 1):
            apow[k] = apow[k - 1] * a if mod is None else (apow[k - 1] * a) % mod
        bk = 1
        for k in range(n + 1):
            c = binom * apow[n - k] * bk
            if mod is not None:
                c %= mod
            if c:
                e = tuple((n - k) * x + k * y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c
            binom = binom * (n - k) // (k + 1)
            bk = bk * b if mod is None else (bk * b) % mod
        out = {e: c for e, c in out.items() if c}
        return MPoly._raw(out, self.gens, self.domain)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = MPoly.const(other, self.domain)
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.domain == other.domain and self.gens == other.gens
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.gens, frozenset(self._terms.items())))
        return self._hash

    # -- misc ----------------------------------------------------------

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        gens = tuple(mapping.get(g, g) for g in self.gens)
        return MPoly(self._terms, gens, self.domain)

    def map_coeffs(self, fn, domain: CoeffDomain | None = None) -> "MPoly":
        return MPoly({e: fn(c) for e, c in self._terms.items()}, self.gens, domain or self.domain)

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = math.gcd(g, c)
        return g

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        if self.domain.is_exact:
            return f"MPoly('{self}')"
        return f"MPoly('{self}', {self.domain})"


# -- text format ---------------------------------------------------------

def format_poly(f: MPoly) -> str:
    if not f._terms:
        return "0"
    pieces = []
    for e, c in f.sorted_terms():
        mono = "*".join(g if x == 1 else f"{g}^{x}" for g, x in zip(f.gens, e) if x)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", num))
        elif name is not None:
            out.append(("var", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, domain):
        self.toks = tokens
        self.i = 0
        self.domain = domain

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}, got {val!r}")

    def expr(self) -> MPoly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> MPoly:
        acc = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> MPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer literal")
            base = base ** int(val)
        return base

    def atom(self) -> MPoly:
        kind, val = self.take()
        if kind == "int":
            return MPoly.const(int(val), ZZ)
        if kind == "var":
            return MPoly.var(val, ZZ)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected token {val!r}")


def parse_poly(text: str, domain: CoeffDomain = ZZ) -> MPoly:
    """Parse the text format; ``^`` binds tighter than ``*``."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial text")
    parser = _Parser(tokens, domain)
    f = parser.expr()
    if parser.i != len(tokens):
        raise PolyParseError(f"trailing input near token {parser.i}")
    if domain.is_exact:
        return f
    return MPoly(f._terms, f.gens, domain)


# -- operations ----------------------------------------------------------

def poly_arith(a: MPoly, b: Coercible, op: str) -> MPoly:
    """Dispatch ``add | sub | mul | pow``; for ``pow`` the second operand is the exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise PolyError(f"unknown operation {op!r}")


def _compose(f: MPoly, var: str, binding: MPoly) -> MPoly:
    """Replace ``var`` by ``binding`` in ``f`` (binding must not mention ``var``'s temp)."""
    parts = f.coeff_by(var)
    if not parts:
        return f
    top = max(parts)
    if len(binding) == 1 or top < 8 or top + 1 > 2 * len(parts) + 4:
        out = MPoly.const(0, f.domain)
        prev_k, prev_pow = 0, MPoly.const(1, f.domain)
        for k in sorted(parts):
            prev_pow = prev_pow * binding ** (k - prev_k)
            prev_k = k
            out = out + parts[k] * prev_pow
        return out
    coeffs = [parts.get(k, MPoly.const(0, f.domain)) for k in range(top + 1)]
    squares = [binding]

    def power_of_two(j):
        while len(squares) <= j:
            squares.append(squares[-1] * squares[-1])
        return squares[j]

    def rec(cs):
        if len(cs) <= 4:
            acc = cs[-1]
            for c in reversed(cs[:-1]):
                acc = acc * binding + c
            return acc
        j = (len(cs) - 1).bit_length() - 1
        h = 1 << j
        return rec(cs[:h]) + power_of_two(j) * rec(cs[h:])

    return rec(coeffs)


def substitute(f: MPoly, bindings: Mapping[str, Coercible]) -> MPoly:
    """Image of ``f`` under the ring homomorphism sending each bound variable
    to its binding (simultaneously) and fixing coefficients and unbound
    variables."""
    bound = {}
    for v, b in bindings.items():
        b = f._coerce(b)
        if v in f.gens:
            bound[v] = b
    if not bound:
        return f
    temps = {v: f"_tmp_{v}" for v in bound}
    clash = set(temps.values()) & (set(f.gens) | {g for b in bound.values() for g in b.gens})
    if clash:
        raise PolyError(f"reserved variable names in use: {sorted(clash)}")
    g = f.rename(temps)
    for v, b in bound.items():
        g = _compose(g, temps[v], b)
    return g


@dataclass(frozen=True)
class DivResult:
    """Outcome of :func:`exact_divide`.

    ``quotient`` is set iff the division is exact with integral quotient;
    otherwise ``remainder`` holds a nonzero witness, or ``reason`` explains
    that the rational quotient is not integral.
    """

    quotient: MPoly | None
    remainder: MPoly | None = None
    reason: str = ""

    @property
    def divisible(self) -> bool:
        return self.quotient is not None

    def __bool__(self):
        return self.divisible


def exact_divide(a: MPoly, b: MPoly) -> DivResult:
    """Divide ``a`` by ``b`` exactly, certifying ``b * quotient == a``."""
    b = a._coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return DivResult(MPoly.const(0, a.domain))
    gens, ta, tb = a._align(b)
    mod = a.domain.modulus
    if mod is not None:
        lead = max(tb)
        if tb[lead] % a.domain.p == 0:
            raise PolyError("leading coefficient of divisor is not a unit mod p")
    elif len(ta) > 64 and gens:
        quick = _kernel.kronecker_divexact(ta, tb)
        if quick is not None:
            return DivResult(MPoly._raw(quick, gens, a.domain))
    quot, rem, integral = _kernel.long_divide(ta, tb, key=lambda e: e, modulus=mod)
    if rem:
        rem = {e: (Fraction(c) if not isinstance(c, int) else c) for e, c in rem.items()}
        if all(isinstance(c, int) for c in rem.values()):
            return DivResult(None, MPoly._raw(rem, gens, a.domain), "nonzero remainder")
        return DivResult(None, None, "nonzero remainder with rational coefficients")
    if not integral:
        shown = " + ".join(f"({c})*{e}" for e, c in sorted(quot.items(), reverse=True)[:4])
        return DivResult(None, None, f"quotient has non-integral coefficients: {shown} ...")
    q = MPoly._raw(quot, gens, a.domain)
    return DivResult(q)


def divide_by_p(a: MPoly, k: int, p: int | None = None) -> MPoly:
    """Exact division by ``p**k``.

    Over Z the prime must be passed explicitly.  Over Z/p^N the result has
    precision N-k.
    """
    if not isinstance(k, int) or k < 1:
        raise PolyError("k must be a positive integer")
    dom = a.domain
    if dom.is_exact:
        if p is None:
            raise PolyError("p is required for integer coefficients")
        pk = p ** k
        out = {}
        for e, c in a.items():
            q, r = divmod(c, pk)
            if r:
                raise NotDivisibleByPError(f"coefficient {c} not divisible by {p}^{k}")
            out[e] = q
        return MPoly._raw(out, a.gens, dom)
    if p is not None and p != dom.p:
        raise DomainMismatchError(f"p={p} does not match domain {dom}")
    if k >= dom.N:
        raise PolyError(f"cannot divide by {dom.p}^{k} at precision {dom.N}")
    pk = dom.p ** k
    new = CoeffDomain(dom.p, dom.N - k)
    out = {}
    for e, c in a.items():
        q, r = divmod(c, pk)
        if r:
            raise NotDivisibleByPError(f"coefficient {c} not divisible by {dom.p}^{k}")
        out[e] = q
    return MPoly(out, a.gens, new)


def u_valuation(a: MPoly) -> float | int:
    """Minimal exponent of ``u`` over all terms; ``math.inf`` for zero."""
    return a.min_degree("u")


def reduce_mod_pn(a: MPoly, p: int, N: int) -> MPoly:
    """Reduce coefficients into [0, p^N); the result lives over Z/p^N."""
    dom = CoeffDomain(p, N)
    if not a.domain.is_exact:
        if a.domain.p != p or a.domain.N < N:
            raise DomainMismatchError(f"cannot reduce {a.domain} to {dom}")
    return MPoly(a._terms, a.gens, dom)
