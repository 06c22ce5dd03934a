"""Exact positivity kernels for binary forms and symmetric matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

from .forms import Form, FormError, binary_a, binary_raw
from .tower import TowerScalar, tower_sign
from .univariate import (
    count_real_roots,
    evaluate as uni_eval,
    isolate_real_roots,
    root_bound,
    squarefree_decomposition,
    strip,
)
from .verdicts import BOUNDARY, INTERIOR, OUTSIDE, Decision


class PsdTag(Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    PSD_WITH_ZEROS = "PsdWithZeros"
    INDEFINITE = "Indefinite"

    def __str__(self):
        return self.value


POSITIVE_DEFINITE = PsdTag.POSITIVE_DEFINITE
PSD_WITH_ZEROS = PsdTag.PSD_WITH_ZEROS
INDEFINITE = PsdTag.INDEFINITE


@dataclass(frozen=True)
class RealZero:
    """A real projective zero.

    Either ``point`` is exact, or the zero is (1, t) where t is the unique root
    of the square-free polynomial ``poly`` (lowest degree first) inside the open
    interval ``interval``.
    """

    multiplicity: int
    point: tuple | None = None
    poly: tuple | None = None
    interval: tuple | None = None

    @property
    def is_exact(self) -> bool:
        return self.point is not None

    def approx(self) -> tuple[float, ...]:
        if self.point is not None:
            return tuple(float(c) for c in self.point)
        lo, hi = self.interval
        return (1.0, (float(lo) + float(hi)) / 2)

    def to_json(self) -> dict:
        from .serialize import jsonable

        out = {"multiplicity": self.multiplicity}
        if self.point is not None:
            out["point"] = jsonable(self.point)
        else:
            out["poly"] = jsonable(self.poly)
            out["interval"] = jsonable(self.interval)
        return out


@dataclass(frozen=True)
class PsdStatus:
    tag: PsdTag
    zeros: tuple = ()
    evidence: dict = field(default_factory=dict, compare=False)
    form: Form | None = field(default=None, compare=False, repr=False)

    @cached_property
    def witness(self):
        """A point where the form is negative (Indefinite binary forms only)."""
        if self.tag is not INDEFINITE or self.form is None:
            return None
        return _negative_witness(self.form)

    @property
    def is_psd(self) -> bool:
        return self.tag is not INDEFINITE

    @property
    def is_pd(self) -> bool:
        return self.tag is POSITIVE_DEFINITE

    def to_json(self) -> dict:
        from .serialize import jsonable

        out = {"tag": str(self.tag), "zeros": [z.to_json() for z in self.zeros]}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        out["evidence"] = jsonable(self.evidence)
        return out

    def as_decision(self, cone: str = "P") -> Decision:
        v = {POSITIVE_DEFINITE: INTERIOR, PSD_WITH_ZEROS: BOUNDARY, INDEFINITE: OUTSIDE}[self.tag]
        return Decision(v, cone, f"form is {self.tag}", {"psd_status": self})


def _negative_witness(p: Form):
    """Search a point where p < 0 (only called for indefinite p)."""
    if p.degree % 2:
        return _odd_witness(p)
    q = strip(binary_raw(p))
    cands = []
    if len(q) > 1:
        B = root_bound(q)
        for item in isolate_real_roots(squarefree_part(q), detect_rational=False):
            if item[0] == "interval":
                cands += [item[1], item[2]]
            else:
                x = item[1]
                cands += [x - Fraction(1, 2**20), x + Fraction(1, 2**20)]
        cands += [B + 1, -B - 1, Fraction(0)]
    else:
        cands += [Fraction(0), Fraction(1)]
    for t in cands:
        for pt in ((Fraction(1), t), (Fraction(-1), -t)):
            if tower_sign(p(pt)) < 0:
                return pt
    for k in range(1, 80):
        eps = Fraction(1, 2**k)
        for pt in ((eps, Fraction(1)), (-eps, Fraction(1))):
            if tower_sign(p(pt)) < 0:
                return pt
    return None


def squarefree_part(q: list) -> list:
    from .univariate import poly_mul

    out = [Fraction(1)]
    for s, _ in squarefree_decomposition(q):
        out = poly_mul(out, s)
    return out


def binary_psd_status(p: Form) -> PsdStatus:
    """Exact PositiveDefinite / PsdWithZeros / Indefinite decision for a binary form."""
    if p.nvars != 2:
        raise FormError("binary_psd_status needs a binary form")
    if p.is_zero():
        raise FormError("the zero form has no psd status")
    d = p.degree
    raw = binary_raw(p)
    q = strip(raw)  # q(t) = p(1, t)
    a = d - (len(q) - 1)  # multiplicity of the zero at (0, 1)
    ev: dict = {"degree": d, "multiplicity_at_(0,1)": a}
    if d % 2 == 1:
        return PsdStatus(INDEFINITE, (), {**ev, "reason": "odd degree"}, p)
    if a % 2 == 1:
        return PsdStatus(INDEFINITE, (), {**ev, "reason": "odd multiplicity at (0,1)"}, p)
    lc_sign = tower_sign(q[-1])
    ev["leading_sign"] = lc_sign
    if lc_sign < 0:
        return PsdStatus(INDEFINITE, (), {**ev, "reason": "negative leading coefficient"}, p)
    factors = squarefree_decomposition(q) if len(q) > 1 else []
    counts = []
    odd_roots = False
    for s, k in factors:
        n = count_real_roots(s)
        counts.append({"multiplicity": k, "degree": len(s) - 1, "real_roots": n})
        if k % 2 == 1 and n > 0:
            odd_roots = True
    ev["sturm_counts"] = counts
    if odd_roots:
        return PsdStatus(INDEFINITE, (), {**ev, "reason": "real root of odd multiplicity"}, p)
    zeros = []
    if a > 0:
        zeros.append(RealZero(a, point=(Fraction(0), Fraction(1))))
    has_finite = any(c["real_roots"] > 0 for c in counts)
    if has_finite:
        for s, k in factors:
            if k % 2 == 1:
                continue
            for item in isolate_real_roots(s):
                if item[0] == "exact":
                    zeros.append(RealZero(k, point=(Fraction(1), item[1])))
                else:
                    zeros.append(RealZero(k, poly=tuple(s), interval=(item[1], item[2])))
    if zeros:
        return PsdStatus(PSD_WITH_ZEROS, tuple(zeros), ev, p)
    return PsdStatus(POSITIVE_DEFINITE, (), ev, p)


def _odd_witness(p: Form):
    for pt in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))):
        v = p(pt)
        s = tower_sign(v)
        if s:
            return pt if s < 0 else (-pt[0], -pt[1])
    for k in range(2, 200):
        pt = (Fraction(1), Fraction(k))
        s = tower_sign(p(pt))
        if s:
            return pt if s < 0 else (-pt[0], -pt[1])
    return None


def is_psd(p: Form) -> bool:
    return binary_psd_status(p).is_psd


# -- symmetric matrices ---------------------------------------------------------------

def _matmul(A, B, zero=0):
    cols = list(zip(*B))
    out = []
    for row in A:
        r = []
        for col in cols:
            acc = zero
            for a, b in zip(row, col):
                if a != 0 and b != 0:
                    acc = acc + a * b
            r.append(acc)
        out.append(r)
    return out


def charpoly(M: Sequence[Sequence]) -> list:
    """Coefficients of det(x I - M), lowest degree first (Faddeev-LeVerrier)."""
    n = len(M)
    if n == 0:
        return [Fraction(1)]
    if all(not isinstance(v, TowerScalar) for row in M for v in row):
        L = 1
        for row in M:
            for v in row:
                L = lcm(L, Fraction(v).denominator)
        ints = [[int(Fraction(v) * L) for v in row] for row in M]
        c = _leverrier(ints, exact_int=True)
        # det(xI - M) = L^-n det(Lx I - LM)
        return [Fraction(c[k], L ** (n - k)) for k in range(n + 1)]
    return _leverrier([[v for v in row] for row in M], exact_int=False)


def _leverrier(A, exact_int: bool) -> list:
    n = len(A)
    zero = 0 if exact_int else Fraction(0)
    coeffs = [zero] * (n + 1)
    coeffs[n] = 1 if exact_int else Fraction(1)
    Mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = _matmul(A, Mk, zero)
        c_prev = coeffs[n - k + 1]
        Mk = [[AM[i][j] + (c_prev if i == j else zero) for j in range(n)] for i in range(n)]
        AMk = _matmul(A, Mk, zero)
        tr = zero
        for i in range(n):
            tr = tr + AMk[i][i]
        if exact_int:
            q, r = divmod(-tr, k)
            assert r == 0
            coeffs[n - k] = q
        else:
            coeffs[n - k] = -tr / k
    return coeffs


def kernel(M: Sequence[Sequence]) -> list[tuple]:
    """Exact basis of the null space of M via Gauss-Jordan elimination."""
    n_rows = len(M)
    n_cols = len(M[0]) if n_rows else 0
    A = [[M[i][j] for j in range(n_cols)] for i in range(n_rows)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for i in range(n_rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [A[i][j] - f * A[r][j] for j in range(n_cols)]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][fc]
        basis.append(tuple(v))
    return basis


def sym_psd_status(M: Sequence[Sequence]) -> PsdStatus:
    """psd / pd / indefinite for a symmetric exact matrix via charpoly sign alternation."""
    n = len(M)
    for i in range(n):
        if len(M[i]) != n:
            raise FormError("matrix must be square")
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise FormError("matrix must be symmetric")
    cp = charpoly(M)
    # det(xI - M) = sum c_k x^k; psd iff (-1)^(n-k) c_k >= 0 for all k
    signs = [tower_sign(c) * (-1) ** (n - k) for k, c in enumerate(cp)]
    ev = {"charpoly": cp, "alternation_signs": signs}
    if any(s < 0 for s in signs):
        return PsdStatus(INDEFINITE, (), ev)
    if all(s > 0 for s in signs):
        return PsdStatus(POSITIVE_DEFINITE, (), ev)
    ker = kernel(M)
    ev["nullity"] = len(ker)
    return PsdStatus(PSD_WITH_ZEROS, tuple(RealZero(2, point=v) for v in ker), ev)


def catalecticant(p: Form) -> list[list]:
    """Hankel matrix [a(p; i+j)] of a binary form of even degree 2r."""
    if p.nvars != 2:
        raise FormError("catalecticant is defined here for binary forms")
    if p.degree % 2:
        raise FormError("catalecticant needs even degree")
    r = p.degree // 2
    a = binary_a(p)
    return [[a[i + j] for j in range(r + 1)] for i in range(r + 1)]


def q_membership(p: Form) -> Decision:
    """Membership in Q_{2,2r} (sums of 2r-th powers) via the Hankel matrix."""
    H = catalecticant(p)
    st = sym_psd_status(H)
    v = {POSITIVE_DEFINITE: INTERIOR, PSD_WITH_ZEROS: BOUNDARY, INDEFINITE: OUTSIDE}[st.tag]
    return Decision(v, "Q", f"Hankel matrix is {st.tag}", {"hankel": H, "psd_status": st})


def uni_sign_at(q: list, t) -> int:
    return tower_sign(uni_eval(q, t))
