"""Univariate exact kernels: square-free decomposition, Sturm chains, isolation.

Polynomials are coefficient lists, lowest degree first, with no trailing zeros.
Two coefficient domains are supported:

* integers (rational inputs are cleared of denominators), using primitive
  pseudo-remainder sequences so that coefficient growth stays modest;
* any exact field whose elements expose a sign via :func:`tower_sign`
  (``Fraction`` and :class:`~blenders.tower.TowerScalar`).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .tower import TowerScalar, tower_sign


def strip(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1


def derivative(p: list) -> list:
    return strip([k * p[k] for k in range(1, len(p))])


def is_rational_poly(p) -> bool:
    return all(not isinstance(c, TowerScalar) for c in p)


def to_integer_poly(p) -> list[int]:
    """Positive rational multiple of ``p`` with coprime integer coefficients."""
    fr = [Fraction(c) for c in p]
    den = 1
    for c in fr:
        den = lcm(den, c.denominator)
    ip = [int(c * den) for c in fr]
    return _primitive(ip)


def _content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(p: list[int]) -> list[int]:
    p = strip(p)
    if not p:
        return p
    g = _content(p)
    if g > 1:
        p = [c // g for c in p]
    return p


# -- integer domain -----------------------------------------------------------

def _iprem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder scaled to a positive multiple of rem(a, b)."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    steps = 0
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1]
        a = [lb * x for x in a]
        for i, bi in enumerate(b):
            a[i + k] -= c * bi
        a = strip(a)
        steps += 1
    if lb < 0 and steps % 2 == 1:
        a = [-x for x in a]
    return _primitive(a)


def _igcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _iprem(a, b)
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def _idiv_exact(a: list[int], b: list[int]) -> list[int]:
    """Quotient a/b over Q, returned as a primitive integer polynomial."""
    fa = [Fraction(x) for x in a]
    q = _fdiv_exact(fa, [Fraction(x) for x in b])
    return to_integer_poly(q)


def _isign_at(p: list[int], x: Fraction) -> int:
    """Sign of p(x) for a rational x, using integer arithmetic only."""
    num, den = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for c in reversed(p):
        acc = acc * num + c * qpow
        qpow *= den
    # acc = den^deg * p(x)
    return (acc > 0) - (acc < 0)


# -- field domain -------------------------------------------------------------

def _fdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    inv = Fraction(1) / lb if not isinstance(lb, TowerScalar) else lb.inverse()
    q = [Fraction(0)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] * inv
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] = a[i + k] - c * bi
        a.pop()
        a = strip(a)
    return strip(q), a


def _fdiv_exact(a: list, b: list) -> list:
    q, r = _fdivmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _monic(p: list) -> list:
    lc = p[-1]
    if lc == 1:
        return list(p)
    inv = Fraction(1) / lc if not isinstance(lc, TowerScalar) else lc.inverse()
    return [c * inv for c in p]


def _fgcd(a: list, b: list) -> list:
    a, b = strip(a), strip(b)
    while b:
        a, b = b, _fdivmod(a, b)[1]
    return _monic(a) if a else a


def evaluate(p: list, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _fsign_at(p: list, x) -> int:
    return tower_sign(evaluate(p, x))


# -- dispatch -----------------------------------------------------------------

class _Domain:
    def __init__(self, integer: bool):
        self.integer = integer

    def normalize(self, p):
        return to_integer_poly(p) if self.integer else _monic(strip(p))

    def gcd(self, a, b):
        return _igcd(a, b) if self.integer else _fgcd(a, b)

    def div(self, a, b):
        return _idiv_exact(a, b) if self.integer else _fdiv_exact(a, b)

    def neg_rem(self, a, b):
        if self.integer:
            r = _iprem(a, b)
        else:
            r = _fdivmod(a, b)[1]
        return [-c for c in r]

    def sign_at(self, p, x) -> int:
        return _isign_at(p, x) if self.integer else _fsign_at(p, x)


def domain_for(p) -> _Domain:
    return _Domain(is_rational_poly(p))


def squarefree_decomposition(p: list) -> list[tuple[list, int]]:
    """Return [(s_k, k)] with p = c * prod s_k^k, each s_k square-free, non-constant.

    Uses the iterated-gcd scheme g_0 = p, g_{k+1} = gcd(g_k, g_k'), which only
    needs exact division, so primitive integer arithmetic is safe.
    """
    dom = domain_for(p)
    g = dom.normalize(p)
    if len(g) <= 1:
        return []
    gs = [g]
    while len(gs[-1]) > 1:
        cur = gs[-1]
        gs.append(dom.gcd(cur, dom.normalize(derivative(cur))))
    # h_k = g_{k-1}/g_k collects the factors of multiplicity >= k
    hs = [dom.div(gs[k - 1], gs[k]) for k in range(1, len(gs))]
    out = []
    for k in range(1, len(hs) + 1):
        h = hs[k - 1]
        nxt = hs[k] if k < len(hs) else [1]
        s = dom.div(h, nxt) if len(nxt) > 1 else h
        if len(s) > 1:
            out.append((dom.normalize(s), k))
    return out


def sturm_chain(p: list) -> list[list]:
    dom = domain_for(p)
    p = dom.normalize(p)
    chain = [p]
    d = derivative(p)
    if not d:
        return chain
    chain.append(dom.normalize(d) if dom.integer else d)
    while True:
        r = dom.neg_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(r)
    return chain


def _sign_lc(p) -> int:
    return tower_sign(p[-1])


def _sign_at_inf(p, neg: bool) -> int:
    s = _sign_lc(p)
    if neg and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def _variations(signs) -> int:
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


class SturmCounter:
    """Counts distinct real roots of a polynomial in half-open intervals (a, b]."""

    def __init__(self, p: list):
        self.dom = domain_for(p)
        self.chain = sturm_chain(p)

    def variations_at(self, x) -> int:
        if x == "-inf":
            return _variations(_sign_at_inf(q, True) for q in self.chain)
        if x == "+inf":
            return _variations(_sign_at_inf(q, False) for q in self.chain)
        return _variations(self.dom.sign_at(q, x) for q in self.chain)

    def count(self, lo="-inf", hi="+inf") -> int:
        return self.variations_at(lo) - self.variations_at(hi)


def count_real_roots(p: list, lo="-inf", hi="+inf") -> int:
    """Number of distinct real roots of p in (lo, hi]."""
    p = strip(p)
    if len(p) <= 1:
        return 0
    return SturmCounter(p).count(lo, hi)


def _abs_upper(x) -> Fraction:
    """A rational upper bound for |x|."""
    if isinstance(x, TowerScalar):
        r = _abs_upper(x.chain[-1])
        # sqrt(r) <= max(1, r)
        return _abs_upper(x.a) + _abs_upper(x.b) * max(Fraction(1), r)
    return abs(Fraction(x))


def root_bound(p: list) -> Fraction:
    """Cauchy bound: every real root lies in (-B, B)."""
    lc = _abs_upper(p[-1]) if not isinstance(p[-1], TowerScalar) else None
    if lc is None:
        p = _monic(p)
        lc = Fraction(1)
    m = max((_abs_upper(c) for c in p[:-1]), default=Fraction(0))
    return 1 + m / lc


def isolate_real_roots(p: list, detect_rational: bool = True) -> list:
    """Isolate the distinct real roots of a square-free polynomial.

    Returns a list of items, each either ``("exact", x)`` with x exact or
    ``("interval", lo, hi)`` with a single root in the open interval (lo, hi),
    sorted increasingly.  ``lo``/``hi`` are rationals.
    """
    p = strip(p)
    if len(p) <= 1:
        return []
    dom = domain_for(p)
    if len(p) == 2:
        return [("exact", _div(-p[0], p[1]))]
    sc = SturmCounter(p)
    B = root_bound(p)
    out = []
    stack = [(-B, B, sc.count(-B, B))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(("interval", lo, hi))
            continue
        mid = (lo + hi) / 2
        left = sc.count(lo, mid)
        if dom.sign_at(p, mid) == 0:
            out.append(("exact", mid))
            stack.append((mid, hi, n - left))
            stack.append((lo, mid, left - 1))
        else:
            stack.append((mid, hi, n - left))
            stack.append((lo, mid, left))
    out.sort(key=lambda it: it[1])
    if detect_rational and dom.integer:
        ip = to_integer_poly(p)
        out = [_try_rational(ip, it) if it[0] == "interval" else it for it in out]
    return out


def _div(a, b):
    if isinstance(b, TowerScalar):
        return b.inverse() * a
    if isinstance(a, TowerScalar):
        return a / b
    return Fraction(a) / b


def _try_rational(p: list[int], item):
    """Replace an isolating interval by the exact root when it is rational.

    A rational root n/d of a primitive integer polynomial has d | lc, so once
    the interval is narrower than 1/(2 lc^2) the only candidate is the best
    approximation with denominator at most lc.
    """
    _, lo, hi = item
    lc = abs(p[-1])
    lo, hi = refine_interval(p, lo, hi, Fraction(1, 2 * lc * lc))
    if lo == hi:
        return ("exact", lo)
    cand = ((lo + hi) / 2).limit_denominator(lc)
    if lo < cand < hi and _isign_at(p, cand) == 0:
        return ("exact", cand)
    return ("interval", lo, hi)


def refine_interval(p: list, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a square-free p until narrower than width."""
    dom = domain_for(p)
    slo = dom.sign_at(p, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = dom.sign_at(p, mid)
        if sm == 0:
            return mid, mid
        if slo == 0 or sm == slo:
            lo, slo = mid, sm
        else:
            hi = mid
    return lo, hi


def poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return strip(out)
