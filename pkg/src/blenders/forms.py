"""Homogeneous forms with exact coefficients.

A :class:`Form` stores the raw coefficient ``r(i)`` of each monomial ``x^i``.
The normalized coefficient used by the apolarity inner product is
``a(p; i) = r(i) / c(i)`` where ``c(i)`` is the multinomial coefficient.
Coefficients are ``Fraction`` or :class:`~blenders.tower.TowerScalar`.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from types import MappingProxyType
from typing import Iterable, Sequence

from .tower import TowerError, TowerScalar, chain_of, tower_sqrt

Exponent = tuple


class FormError(ValueError):
    """Shape mismatch between forms (nvars, degree) or malformed input."""


def _coeff(c):
    if isinstance(c, TowerScalar):
        return c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"unsupported coefficient {c!r}; use int, Fraction or TowerScalar")


_RAT = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
_DEC = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse "n", "n/d" or a decimal literal exactly (never via float)."""
    if not isinstance(text, str):
        raise FormError(f"expected a string rational, got {text!r}")
    if _RAT.match(text):
        return Fraction(text.replace(" ", ""))
    if _DEC.match(text):
        return Fraction(text.strip())
    raise FormError(f"not an exact rational: {text!r}")


@lru_cache(maxsize=None)
def index_set(n: int, d: int) -> tuple:
    """All exponents of degree d in n variables, in descending lexicographic order."""
    if n < 1 or d < 0:
        raise FormError("index_set needs n >= 1 and d >= 0")
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in index_set(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def multinomial(i: Sequence[int]) -> int:
    """c(i) = d! / prod(i_k!)."""
    d = sum(i)
    out = factorial(d)
    for k in i:
        out //= factorial(k)
    return out


class Form:
    """Immutable homogeneous polynomial."""

    __slots__ = ("nvars", "degree", "_terms", "_hash")

    def __init__(self, nvars: int, degree: int, terms=None):
        if nvars < 1 or degree < 0:
            raise FormError("need nvars >= 1 and degree >= 0")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or sum(exp) != degree or min(exp) < 0:
                raise FormError(f"exponent {exp} does not fit ({nvars} vars, degree {degree})")
            c = _coeff(c)
            if c != 0:
                clean[exp] = c
        self.nvars = nvars
        self.degree = degree
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, degree, terms):
        f = cls.__new__(cls)
        f.nvars = nvars
        f.degree = degree
        f._terms = terms
        f._hash = None
        return f

    # -- construction helpers ------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: int) -> "Form":
        return cls._raw(nvars, degree, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Form":
        return cls(nvars, 0, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Form":
        exp = tuple(exp)
        return cls(len(exp), sum(exp), {exp: coeff})

    @classmethod
    def var(cls, nvars: int, k: int) -> "Form":
        e = [0] * nvars
        e[k] = 1
        return cls.monomial(e)

    # -- accessors --------------------------------------------------------------
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, exp) -> object:
        return self._terms.get(tuple(exp), Fraction(0))

    def a(self, exp):
        """Normalized coefficient a(p; i) = r(i)/c(i)."""
        c = self.coefficient(exp)
        return c / multinomial(exp) if c != 0 else Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True)

    def is_rational(self) -> bool:
        return all(not isinstance(c, TowerScalar) for c in self._terms.values())

    # -- arithmetic ----------------------------------------------------------------
    def _check_same(self, other: "Form"):
        if not isinstance(other, Form):
            raise FormError("expected a Form")
        if other.nvars != self.nvars or other.degree != self.degree:
            raise FormError(
                f"shape mismatch: ({self.nvars},{self.degree}) vs ({other.nvars},{other.degree})"
            )

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if other.is_zero() and other.nvars == self.nvars:
            return self
        if self.is_zero() and other.nvars == self.nvars:
            return other
        self._check_same(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Form._raw(self.nvars, self.degree, out)

    def __neg__(self):
        return Form._raw(self.nvars, self.degree, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            return multiply(self, other)
        try:
            c = _coeff(other)
        except TypeError:
            return NotImplemented
        return scale(c, self)

    def __rmul__(self, other):
        try:
            c = _coeff(other)
        except TypeError:
            return NotImplemented
        return scale(c, self)

    def __truediv__(self, other):
        c = _coeff(other)
        inv = c.inverse() if isinstance(c, TowerScalar) else Fraction(1) / c
        return scale(inv, self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Form.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = multiply(result, base)
            k >>= 1
            if k:
                base = multiply(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if not self._terms:
                self._hash = hash((self.nvars, "zero"))
            else:
                self._hash = hash((self.nvars, self.degree, frozenset(self._terms.items())))
        return self._hash

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return evaluate(self, point)

    def __repr__(self):
        return f"Form({self.nvars}, {self.degree}, {format_form(self)!r})"

    def __str__(self):
        return format_form(self)


# -- module level operations ----------------------------------------------------

def add(p: Form, q: Form) -> Form:
    return p + q


def scale(c, p: Form) -> Form:
    c = _coeff(c)
    if c == 0:
        return Form.zero(p.nvars, p.degree)
    return Form._raw(p.nvars, p.degree, {e: c * v for e, v in p._terms.items()})


def multiply(p: Form, q: Form) -> Form:
    if p.nvars != q.nvars:
        raise FormError("multiply needs equal nvars")
    out: dict = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e)
            out[e] = c1 * c2 if v is None else v + c1 * c2
    out = {e: c for e, c in out.items() if c != 0}
    return Form._raw(p.nvars, p.degree + q.degree, out)


def evaluate(p: Form, point: Sequence):
    if len(point) != p.nvars:
        raise FormError(f"point has {len(point)} entries, form has {p.nvars} variables")
    total = Fraction(0)
    for e, c in p._terms.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = total + term
    return total


def inner_product(p: Form, q: Form):
    """Apolarity inner product [p, q] = sum c(i) a(p;i) a(q;i)."""
    if p.nvars != q.nvars or (p.degree != q.degree and not (p.is_zero() or q.is_zero())):
        raise FormError("inner product needs equal nvars and degree")
    small, big = (p, q) if len(p._terms) <= len(q._terms) else (q, p)
    total = Fraction(0)
    for e, c in small._terms.items():
        d = big._terms.get(e)
        if d is not None:
            total = total + c * d / multinomial(e)
    return total


def power_form(alpha: Sequence, d: int) -> Form:
    """(alpha . x)^d."""
    alpha = [_coeff(a) for a in alpha]
    n = len(alpha)
    terms = {}
    for i in index_set(n, d):
        c = Fraction(multinomial(i))
        for a, k in zip(alpha, i):
            if k:
                c = c * a**k
        if c != 0:
            terms[i] = c
    return Form._raw(n, d, terms)


def linear_form(coeffs: Sequence) -> Form:
    n = len(coeffs)
    return Form(n, 1, {tuple(1 if j == k else 0 for j in range(n)): c for k, c in enumerate(coeffs)})


def compose(p: Form, M: Sequence[Sequence]) -> Form:
    """(p o M)(x) = p(Mx): substitute x_j -> sum_k m_jk x_k."""
    n = p.nvars
    if len(M) != n or any(len(row) != n for row in M):
        raise FormError(f"matrix must be {n}x{n}")
    lins = [linear_form([_coeff(v) for v in row]) for row in M]
    cache: dict = {}

    def lpow(j, k):
        key = (j, k)
        if key not in cache:
            if k == 0:
                cache[key] = Form.constant(n, 1)
            elif k == 1:
                cache[key] = lins[j]
            else:
                h = k // 2
                cache[key] = multiply(lpow(j, h), lpow(j, k - h))
        return cache[key]

    out = Form.zero(n, p.degree)
    for e, c in p._terms.items():
        t = Form.constant(n, c)
        for j, k in enumerate(e):
            if k:
                t = multiply(t, lpow(j, k))
        out = out + t
    return out


def transpose(M):
    return [list(col) for col in zip(*M)]


def diff(p: Form, k: int, times: int = 1) -> Form:
    """Partial derivative with respect to x_k."""
    if times == 0:
        return p
    if p.degree < times:
        return Form.zero(p.nvars, 0)
    out = {}
    for e, c in p._terms.items():
        if e[k] >= times:
            f = 1
            for j in range(times):
                f *= e[k] - j
            ne = list(e)
            ne[k] -= times
            out[tuple(ne)] = c * f
    return Form._raw(p.nvars, p.degree - times, out)


def diff_apply(f: Form, p: Form) -> Form:
    """Apply the differential operator f(D) = sum r_f(i) D^i to p."""
    if f.nvars != p.nvars:
        raise FormError("diff_apply needs equal nvars")
    if f.degree > p.degree:
        raise FormError("operator degree exceeds form degree")
    out: dict = {}
    for i, cf in f._terms.items():
        for j, cp in p._terms.items():
            if any(a > b for a, b in zip(i, j)):
                continue
            fac = 1
            for a, b in zip(i, j):
                for t in range(a):
                    fac *= b - t
            e = tuple(b - a for a, b in zip(i, j))
            v = cf * cp * fac
            out[e] = out[e] + v if e in out else v
    out = {e: c for e, c in out.items() if c != 0}
    return Form._raw(p.nvars, p.degree - f.degree, out)


def hessian_biform(p: Form) -> Form:
    """Hes(p; u, v) = sum_ij p_ij(u) v_i v_j as a form in (u_1..u_n, v_1..v_n)."""
    if p.degree < 2:
        raise FormError("Hessian needs degree >= 2")
    n = p.nvars
    out = Form.zero(2 * n, p.degree)
    for i in range(n):
        for j in range(n):
            dij = diff(diff(p, i), j)
            vexp = [0] * n
            vexp[i] += 1
            vexp[j] += 1
            terms = {tuple(e) + tuple(vexp): c for e, c in dij._terms.items()}
            out = out + Form._raw(2 * n, p.degree, terms)
    return out


def biermann(j: Sequence[int], n: int, d: int) -> Form:
    """g_j = prod_k prod_{l < j_k} (d x_k - l (x_1 + ... + x_n))."""
    j = tuple(j)
    if len(j) != n or sum(j) != d:
        raise FormError("j must lie in I(n, d)")
    total = linear_form([1] * n)
    out = Form.constant(n, 1)
    for k in range(n):
        xk = Form.var(n, k)
        for ell in range(j[k]):
            out = multiply(out, scale(d, xk) - scale(ell, total))
    return out


# -- binary helpers --------------------------------------------------------------

def binary_form(raw: Sequence) -> Form:
    """Binary form sum raw[k] x^(d-k) y^k."""
    d = len(raw) - 1
    return Form(2, d, {(d - k, k): c for k, c in enumerate(raw)})


def binary_from_a(a: Sequence) -> Form:
    """Binary form sum C(d,k) a[k] x^(d-k) y^k."""
    d = len(a) - 1
    return binary_form([comb(d, k) * _coeff(v) for k, v in enumerate(a)])


def binary_raw(p: Form) -> list:
    _need_binary(p)
    d = p.degree
    return [p._terms.get((d - k, k), Fraction(0)) for k in range(d + 1)]


def binary_a(p: Form) -> list:
    d = p.degree
    return [c / comb(d, k) for k, c in enumerate(binary_raw(p))]


def dehomogenize(p: Form) -> list:
    """Coefficients of p(1, t), lowest degree first (trailing zeros stripped)."""
    raw = binary_raw(p)
    while raw and raw[-1] == 0:
        raw.pop()
    return raw


def binary_divide(p: Form, q: Form) -> Form:
    """Exact quotient p / q of binary forms; raises if q does not divide p."""
    from .univariate import _fdivmod, strip

    _need_binary(p)
    _need_binary(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero form")
    dq = q.degree
    if dq > p.degree:
        raise FormError("divisor degree exceeds dividend degree")
    P, Q = strip(binary_raw(p)), strip(binary_raw(q))
    quo, rem = _fdivmod(P, Q) if P else ([], [])
    if rem or len(quo) - 1 > p.degree - dq:
        raise FormError("form is not divisible")
    quo = list(quo) + [Fraction(0)] * (p.degree - dq + 1 - len(quo))
    return binary_form(quo)


def _need_binary(p: Form):
    if p.nvars != 2:
        raise FormError("binary form expected")


# -- formatting & serialization -----------------------------------------------------

def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{k + 1}" for k in range(n)]


def _fmt_coeff(c) -> str:
    from .tower import format_scalar

    return format_scalar(c)


def format_form(p: Form, names: Sequence[str] | None = None) -> str:
    if p.is_zero():
        return "0"
    names = list(names) if names else default_names(p.nvars)
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (nm if k == 1 else f"{nm}^{k}") for nm, k in zip(names, e) if k
        )
        neg = not isinstance(c, TowerScalar) and c < 0
        mag = -c if neg else c
        cs = _fmt_coeff(mag)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[1:]


def scalar_to_json(c):
    if isinstance(c, TowerScalar):
        return {"a": scalar_to_json(c.a), "b": scalar_to_json(c.b), "root": scalar_to_json(c.chain[-1])}
    c = Fraction(c)
    return str(c)


def scalar_from_json(obj):
    if isinstance(obj, bool):
        raise FormError("boolean is not a coefficient")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, dict):
        try:
            a = scalar_from_json(obj["a"])
            b = scalar_from_json(obj["b"])
            root = scalar_from_json(obj["root"])
        except KeyError as exc:
            raise FormError(f"tower coefficient missing key {exc}") from None
        over = max((chain_of(a), chain_of(b), chain_of(root)), key=len)
        try:
            return a + b * tower_sqrt(root, over=over)
        except TowerError as exc:
            raise FormError(str(exc)) from None
    raise FormError(f"unsupported coefficient encoding {obj!r}")


def form_to_json(p: Form) -> dict:
    return {
        "nvars": p.nvars,
        "degree": p.degree,
        "terms": [{"exp": list(e), "coeff": scalar_to_json(c)} for e, c in p.sorted_terms()],
    }


def form_from_json(obj) -> Form:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise FormError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormError("form JSON must be an object")
    try:
        n = obj["nvars"]
        d = obj["degree"]
        raw_terms = obj["terms"]
    except KeyError as exc:
        raise FormError(f"form JSON missing key {exc}") from None
    if not isinstance(n, int) or not isinstance(d, int) or not isinstance(raw_terms, list):
        raise FormError("nvars/degree must be integers and terms a list")
    terms: dict = {}
    for t in raw_terms:
        if not isinstance(t, dict) or "exp" not in t or "coeff" not in t:
            raise FormError(f"malformed term {t!r}")
        exp = tuple(t["exp"])
        if not all(isinstance(k, int) for k in exp):
            raise FormError(f"exponent entries must be integers: {t['exp']!r}")
        c = scalar_from_json(t["coeff"])
        terms[exp] = terms.get(exp, Fraction(0)) + c
    return Form(n, d, terms)


def dumps(p: Form) -> str:
    return json.dumps(form_to_json(p), sort_keys=True)


def float_evaluator(p: Form):
    """Vectorised float evaluation: returns f(points) for an (m, n) array."""
    import numpy as np

    exps = np.array([e for e in p._terms], dtype=float).reshape(-1, p.nvars)
    coeffs = np.array([float(c) for c in p._terms.values()], dtype=float)

    def f(points):
        pts = np.asarray(points, dtype=float)
        if not len(coeffs):
            return np.zeros(pts.shape[0])
        mono = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return mono @ coeffs

    return f


def forms_equal(p: Form, q: Form) -> bool:
    return (p - q).is_zero() if p.nvars == q.nvars and p.degree == q.degree else p == q


def xy() -> tuple[Form, Form]:
    return Form.var(2, 0), Form.var(2, 1)


def sum_forms(forms: Iterable[Form], nvars: int, degree: int) -> Form:
    out = Form.zero(nvars, degree)
    for f in forms:
        out = out + f
    return out


def det2(M) -> object:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


__all__ = [
    "Exponent",
    "Form",
    "FormError",
    "add",
    "binary_a",
    "binary_divide",
    "binary_form",
    "binary_from_a",
    "binary_raw",
    "biermann",
    "compose",
    "dehomogenize",
    "det2",
    "diff",
    "diff_apply",
    "evaluate",
    "float_evaluator",
    "form_from_json",
    "form_to_json",
    "format_form",
    "hessian_biform",
    "index_set",
    "inner_product",
    "linear_form",
    "multinomial",
    "multiply",
    "parse_rational",
    "power_form",
    "scale",
    "transpose",
]
