"""Exact arithmetic in a tower of at most two quadratic extensions of Q.

An element at level k is stored as ``a + b*sqrt(r)`` where ``a`` and ``b`` live
in the level below and ``r`` is the top radicand of ``chain``.  Elements with
``b == 0`` are always collapsed to the lower level, so a plain ``Fraction`` is a
level-0 element and every :class:`TowerScalar` is genuinely irrational.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational

MAX_DEPTH = 2


class TowerError(ArithmeticError):
    """Raised for depth overflow, negative radicands or incompatible towers."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def chain_of(x) -> tuple:
    return x.chain if isinstance(x, TowerScalar) else ()


def _is_prefix(short: tuple, long: tuple) -> bool:
    return len(short) <= len(long) and long[: len(short)] == short


def _make(a, b, chain):
    if b == 0:
        return a
    return TowerScalar(a, b, chain)


class TowerScalar:
    __slots__ = ("a", "b", "chain", "_sign")

    def __init__(self, a, b, chain: tuple):
        # Trusted constructor; use tower_sqrt / arithmetic to build values.
        self.a = a
        self.b = b
        self.chain = chain
        self._sign = None

    @property
    def radicand(self):
        return self.chain[-1]

    @property
    def level(self) -> int:
        return len(self.chain)

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, TowerScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        if isinstance(other, Rational):
            return Fraction(other)
        return None

    def _align(self, other):
        """Return 'same', 'lower' (other sits below self) or 'higher'."""
        oc = chain_of(other)
        sc = self.chain
        if oc is sc or oc == sc:
            return "same"
        if _is_prefix(oc, sc):
            return "lower"
        if _is_prefix(sc, oc):
            return "higher"
        raise TowerError("elements belong to incompatible towers")

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        rel = self._align(other)
        if rel == "same":
            return _make(self.a + other.a, self.b + other.b, self.chain)
        if rel == "lower":
            return _make(self.a + other, self.b, self.chain)
        return other.__add__(self)

    __radd__ = __add__

    def __neg__(self):
        return TowerScalar(-self.a, -self.b, self.chain)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        rel = self._align(other)
        if rel == "same":
            r = self.chain[-1]
            a = self.a * other.a + self.b * other.b * r
            b = self.a * other.b + self.b * other.a
            return _make(a, b, self.chain)
        if rel == "lower":
            if other == 0:
                return Fraction(0)
            return _make(self.a * other, self.b * other, self.chain)
        return other.__mul__(self)

    __rmul__ = __mul__

    def conjugate(self):
        return TowerScalar(self.a, -self.b, self.chain)

    def norm(self):
        """a^2 - b^2 r, an element of the level below."""
        return self.a * self.a - self.b * self.b * self.chain[-1]

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("tower element is zero")
        inv = 1 / n if isinstance(n, TowerScalar) else Fraction(1) / n
        return _make(self.a * inv, -self.b * inv, self.chain)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if isinstance(other, TowerScalar):
            return self * other.inverse()
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return self * (Fraction(1) / other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = base * result
            n >>= 1
            if n:
                base = base * base
        return result

    # -- order -------------------------------------------------------------
    def sign(self) -> int:
        if self._sign is None:
            sa = tower_sign(self.a)
            sb = tower_sign(self.b)
            if sa == 0:
                s = sb
            elif sa == sb:
                s = sa
            else:
                # |a| vs |b| sqrt(r): compare a^2 with b^2 r
                s = sa * tower_sign(self.norm())
            self._sign = s
        return self._sign

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not isinstance(other, TowerScalar):
            return False
        try:
            return tower_sign(self - other) == 0
        except TowerError:
            return False

    def __hash__(self):
        return hash((self.a, self.b, self.chain))

    def __lt__(self, other):
        return tower_sign(self - other) < 0

    def __le__(self, other):
        return tower_sign(self - other) <= 0

    def __gt__(self, other):
        return tower_sign(self - other) > 0

    def __ge__(self, other):
        return tower_sign(self - other) >= 0

    def __bool__(self):
        return True

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.chain[-1]) ** 0.5

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"TowerScalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def tower_sign(x) -> int:
    if isinstance(x, TowerScalar):
        return x.sign()
    return (x > 0) - (x < 0)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, TowerScalar))


def format_scalar(x) -> str:
    if isinstance(x, TowerScalar):
        a, b, r = (format_scalar(v) for v in (x.a, x.b, x.chain[-1]))
        return f"({a} + {b}*sqrt({r}))"
    return str(Fraction(x))


def _square_free_part(n: int, limit: int = 10_000) -> tuple[int, int]:
    """Return (k, m) with n = k^2 m, stripping square factors below ``limit``.

    m is not guaranteed square-free for huge n; it only has to be a non-square,
    which callers ensure before adjoining.
    """
    k = 1
    m = n
    f = 2
    while f <= limit and f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        f += 1 if f == 2 else 2
    r = isqrt(m)
    if r * r == m:
        return k * r, 1
    return k, m


def rational_sqrt(q: Fraction):
    """Exact square root of a non-negative rational if it is a square, else None."""
    q = _frac(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_in_level1(x, chain: tuple):
    """Square root of x inside Q(sqrt s) (chain == (s,)) or None."""
    (s,) = chain
    if not isinstance(x, TowerScalar):
        x = _frac(x)
        r = rational_sqrt(x)
        if r is not None:
            return r
        d = rational_sqrt(x / s)
        if d is not None:
            return TowerScalar(Fraction(0), d, chain)
        return None
    if x.chain != chain:
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    for c2 in ((x.a + n) / 2, (x.a - n) / 2):
        c = rational_sqrt(c2)
        if c is None or c == 0:
            continue
        cand = TowerScalar(c, x.b / (2 * c), chain)
        if cand * cand == x:
            return cand if cand.sign() > 0 else -cand
    return None


def tower_sqrt(x, over: tuple = ()):
    """Square root of a non-negative element, adjoining a radicand if needed.

    ``over`` names an existing chain the result should be compatible with; a
    new radicand is appended to it.  Raises :class:`TowerError` beyond depth 2.
    """
    s = tower_sign(x)
    if s < 0:
        raise TowerError("square root of a negative element")
    if s == 0:
        return Fraction(0)
    xc = chain_of(x)
    if not _is_prefix(xc, over):
        if _is_prefix(over, xc):
            over = xc
        else:
            raise TowerError("radicand does not belong to the requested tower")
    if not isinstance(x, TowerScalar):
        x = _frac(x)
        r = rational_sqrt(x)
        if r is not None:
            return r
        if len(over) == 1:
            r = _sqrt_in_level1(x, over)
            if r is not None:
                return r
        elif len(over) == 2:
            r = _sqrt_in_level1(x, over[:1])
            if r is not None:
                return r
            r = _sqrt_level2(x, over)
            if r is not None:
                return r
        if len(over) >= MAX_DEPTH:
            raise TowerError("tower depth limit exceeded")
        k, m = _square_free_part(x.numerator * x.denominator)
        coeff = Fraction(k, x.denominator)
        return TowerScalar(Fraction(0), coeff, over + (Fraction(m),))
    # x is irrational
    if len(over) == 1:
        r = _sqrt_in_level1(x, over)
        if r is not None:
            return r
        return TowerScalar(Fraction(0), Fraction(1), over + (x,))
    if len(over) == 2:
        r = _sqrt_level2(x, over)
        if r is not None:
            return r
    raise TowerError("tower depth limit exceeded")


def _sqrt_level2(x, chain: tuple):
    """Square root of x in Q(sqrt s, sqrt t) when x lies at level <= 1."""
    t = chain[1]
    base = chain[:1]
    if chain_of(x) == chain:
        return None
    r = _sqrt_in_level1(x, base) if chain_of(x) in ((), base) else None
    if r is not None:
        return r
    d2 = x / t
    if chain_of(d2) in ((), base):
        if tower_sign(d2) > 0:
            d = _sqrt_in_level1(d2, base)
            if d is not None:
                return _make(Fraction(0), d, chain)
    return None


def to_float(x) -> float:
    return float(x)
