"""Low-level coefficient kernels for sparse polynomial arithmetic.

Term maps are ``dict[tuple[int, ...], int]`` keyed by exponent vectors over a
fixed generator tuple.  Large products and exact quotients go through
Kronecker substitution: a dense univariate coefficient list is packed into a
single integer, the integers are multiplied (or divided) by GMP, and the
result is unpacked digit by digit.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from fractions import Fraction

import gmpy2

Terms = dict  # dict[tuple[int, ...], int]

# below this many coefficient products the schoolbook loop wins
SCHOOLBOOK_LIMIT = 1024
# dense univariate lists shorter than this are convolved directly
KRONECKER_MIN_LEN = 12


def _pack(coeffs: list[int], nbytes: int) -> int:
    """Evaluate a coefficient list at ``2**(8*nbytes)`` (signed coefficients)."""
    pos = bytearray()
    neg = bytearray()
    zero = bytes(nbytes)
    has_neg = False
    for c in coeffs:
        if c >= 0:
            pos += c.to_bytes(nbytes, "little") if c else zero
            neg += zero
        else:
            has_neg = True
            pos += zero
            neg += (-c).to_bytes(nbytes, "little")
    value = int.from_bytes(pos, "little")
    if has_neg:
        value -= int.from_bytes(neg, "little")
    return value


def _unpack(value: int, count: int, nbytes: int, signed: bool) -> list[int]:
    """Inverse of :func:`_pack` for ``count`` digits."""
    if signed:
        half = 1 << (8 * nbytes - 1)
        slot = bytes(nbytes - 1) + b"\x80"
        value += int.from_bytes(slot * count, "little")
    if value < 0:
        raise ValueError("packed value out of range")
    raw = value.to_bytes(count * nbytes + 1, "little")
    out = [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]
    if signed:
        out = [c - half for c in out]
    return out


def _bits(coeffs) -> int:
    return max((abs(c).bit_length() for c in coeffs), default=0)


def dense_mul(a: list[int], b: list[int], modulus: int | None = None) -> list[int]:
    """Product of two dense coefficient lists (ascending degree)."""
    if not a or not b:
        return []
    if modulus is not None:
        a = [c % modulus for c in a]
        b = [c % modulus for c in b]
    n = len(a) + len(b) - 1
    if min(len(a), len(b)) < KRONECKER_MIN_LEN:
        out = [0] * n
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
    else:
        signed = modulus is None and (min(a) < 0 or min(b) < 0)
        width = _bits(a) + _bits(b) + min(len(a), len(b)).bit_length() + 2
        nbytes = (width + 7) // 8
        pa = gmpy2.mpz(_pack(a, nbytes))
        pb = pa if b is a else gmpy2.mpz(_pack(b, nbytes))
        out = _unpack(int(pa * pb), n, nbytes, signed)
    if modulus is not None:
        out = [c % modulus for c in out]
    return out


def dense_divexact(a: list[int], b: list[int]) -> list[int] | None:
    """Exact integer quotient ``a / b`` of dense lists, or None.

    The quotient is recovered through packed integer division and then
    confirmed by re-multiplication, so a wrong guess of the digit width can
    only produce ``None`` (the caller falls back to long division), never a
    false quotient.
    """
    while a and a[-1] == 0:
        a = a[:-1]
    while b and b[-1] == 0:
        b = b[:-1]
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(b) > len(a):
        return None
    qlen = len(a) - len(b) + 1
    width = _bits(a) + len(a).bit_length() + 66
    nbytes = (width + 7) // 8
    pa = gmpy2.mpz(_pack(a, nbytes))
    pb = gmpy2.mpz(_pack(b, nbytes))
    q, r = gmpy2.t_divmod(pa, pb)
    if r != 0:
        return None
    try:
        quot = _unpack(int(q), qlen, nbytes, True)
    except (ValueError, OverflowError):
        return None
    if dense_mul(quot, b) != a:
        return None
    return quot


def _schoolbook(ta: Terms, tb: Terms, modulus: int | None) -> Terms:
    out: dict = defaultdict(int)
    for ea, ca in ta.items():
        for eb, cb in tb.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    if modulus is None:
        return {e: c for e, c in out.items() if c}
    res = {}
    for e, c in out.items():
        c %= modulus
        if c:
            res[e] = c
    return res


def _split(terms: Terms, j: int):
    """Group terms by all exponents except index ``j``."""
    groups: dict = defaultdict(dict)
    for e, c in terms.items():
        groups[e[:j] + e[j + 1:]][e[j]] = c
    return groups


def mul_terms(ta: Terms, tb: Terms, modulus: int | None = None) -> Terms:
    """Multiply two term maps over the same generators."""
    if not ta or not tb:
        return {}
    if len(ta) * len(tb) <= SCHOOLBOOK_LIMIT:
        return _schoolbook(ta, tb, modulus)
    nvars = len(next(iter(ta)))
    if nvars == 0:
        return _schoolbook(ta, tb, modulus)
    # densest variable carries the Kronecker packing; the rest stay sparse
    best, best_score = 0, -1.0
    for j in range(nvars):
        da = {e[j] for e in ta}
        db = {e[j] for e in tb}
        span = (max(da) - min(da) + 1) + (max(db) - min(db) + 1)
        score = (len(da) + len(db)) / span if len(da) + len(db) > 2 else 0.0
        score *= len(da) + len(db)
        if score > best_score:
            best, best_score = j, score
    j = best
    ga = _split(ta, j)
    gb = _split(tb, j)
    out: dict = defaultdict(int)
    for ka, da in ga.items():
        lo_a = min(da)
        span_a = max(da) - lo_a + 1
        dense_a = span_a <= 4 * len(da) + 8
        la = None
        if dense_a:
            la = [0] * span_a
            for d, c in da.items():
                la[d - lo_a] = c
        for kb, db in gb.items():
            lo_b = min(db)
            span_b = max(db) - lo_b + 1
            outer = tuple(x + y for x, y in zip(ka, kb))
            if dense_a and span_b <= 4 * len(db) + 8 and min(len(da), len(db)) >= KRONECKER_MIN_LEN:
                lb = [0] * span_b
                for d, c in db.items():
                    lb[d - lo_b] = c
                prod = dense_mul(la, lb)
                base = lo_a + lo_b
                for i, c in enumerate(prod):
                    if c:
                        out[outer[:j] + (base + i,) + outer[j:]] += c
            else:
                for d1, c1 in da.items():
                    for d2, c2 in db.items():
                        out[outer[:j] + (d1 + d2,) + outer[j:]] += c1 * c2
    if modulus is None:
        return {e: c for e, c in out.items() if c}
    res = {}
    for e, c in out.items():
        c %= modulus
        if c:
            res[e] = c
    return res


def kronecker_divexact(ta: Terms, tb: Terms) -> Terms | None:
    """Exact quotient of integer term maps via full Kronecker substitution.

    Returns None when the packed route does not apply or does not certify a
    quotient; the caller must then run long division.
    """
    nvars = len(next(iter(ta)))
    lo = [min(e[i] for e in tb) for i in range(nvars)]
    # divisor's monomial content must divide every dividend term
    if any(any(e[i] < lo[i] for i in range(nvars)) for e in ta):
        return None
    ta = {tuple(x - y for x, y in zip(e, lo)): c for e, c in ta.items()}
    tb = {tuple(x - y for x, y in zip(e, lo)): c for e, c in tb.items()}
    degs = [max(e[i] for e in ta) + 1 for i in range(nvars)]
    if any(e[i] >= degs[i] for e in tb for i in range(nvars)):
        return None
    size = 1
    for d in degs:
        size *= d
    if size > 8 * (len(ta) + len(tb)) + 64:
        return None
    strides = []
    acc = 1
    for d in degs:
        strides.append(acc)
        acc *= d

    def flatten(terms):
        dense = [0] * size
        for e, c in terms.items():
            dense[sum(x * s for x, s in zip(e, strides))] = c
        return dense

    quot = dense_divexact(flatten(ta), flatten(tb))
    if quot is None:
        return None
    out = {}
    for idx, c in enumerate(quot):
        if c:
            e = []
            for d in degs:
                e.append(idx % d)
                idx //= d
            out[tuple(e)] = c
    if any(e[i] >= degs[i] for e in out for i in range(nvars)):
        return None
    return out


def long_divide(ta: Terms, tb: Terms, key, modulus: int | None = None):
    """Monomial-order division of ``ta`` by ``tb``.

    ``key`` maps an exponent tuple to its sort key (larger = leading).
    Returns ``(quotient, remainder, integral)``.  The remainder is the
    partial remainder at the first leading term not divisible by the
    divisor's leading monomial (for an exact division it is empty).  Over
    the integers, quotient coefficients may become Fractions; ``integral``
    reports whether every quotient coefficient is an integer.
    """
    lead = max(tb, key=key)
    lc = tb[lead]
    inv = None
    if modulus is not None:
        inv = pow(lc, -1, modulus)
    rem = dict(ta)
    heap = [(_neg(key(e)), e) for e in rem]
    heapq.heapify(heap)
    quot = {}
    integral = True
    while heap:
        _, e = heapq.heappop(heap)
        if e not in rem:
            continue
        if heap and heap[0][1] == e:
            continue
        if any(x < y for x, y in zip(e, lead)):
            break
        c = rem[e]
        if modulus is not None:
            qc = (c * inv) % modulus
        elif isinstance(c, int) and isinstance(lc, int) and c % lc == 0:
            qc = c // lc
        else:
            qc = Fraction(c) / lc
            if qc.denominator == 1:
                qc = qc.numerator
            else:
                integral = False
        qe = tuple(x - y for x, y in zip(e, lead))
        quot[qe] = qc
        for eb, cb in tb.items():
            t = tuple(x + y for x, y in zip(qe, eb))
            old = rem.get(t)
            v = (old or 0) - qc * cb
            if modulus is not None:
                v %= modulus
            if v:
                rem[t] = v
                if old is None:
                    heapq.heappush(heap, (_neg(key(t)), t))
            else:
                rem.pop(t, None)
    return quot, rem, integral


def _neg(k):
    return tuple(-x for x in k)
