"""Sums of 4th powers of binary forms: H_q, the W* boundary test, even symmetric octics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .certificates import Certificate
from .forms import Form, FormError, index_set, multinomial, xy
from .quartics import ROTATION, f_lambda, map_T, psi_certificate
from .realroots import INDEFINITE, binary_psd_status
from .tower import TowerScalar, tower_sign, tower_sqrt
from .verdicts import BOUNDARY, INTERIOR, OUTSIDE, UNKNOWN, Decision


class WaringError(ValueError):
    pass


def _q(v):
    return v if isinstance(v, TowerScalar) else Fraction(v)


# -- binary octics and H_q ------------------------------------------------------------

@dataclass(frozen=True)
class OcticDual:
    """q = sum_k C(8,k) d_k x^(8-k) y^k."""

    d: tuple

    def __post_init__(self):
        if len(self.d) != 9:
            raise WaringError("an octic needs exactly nine coefficients d_0..d_8")
        object.__setattr__(self, "d", tuple(_q(v) for v in self.d))

    @classmethod
    def from_form(cls, q: Form) -> "OcticDual":
        if q.nvars != 2 or q.degree != 8:
            raise FormError("a binary octic is required")
        return cls(tuple(q.a((8 - k, k)) for k in range(9)))

    def form(self) -> Form:
        return Form(2, 8, {(8 - k, k): comb(8, k) * v for k, v in enumerate(self.d)})


def _as_octic(q) -> OcticDual:
    return q if isinstance(q, OcticDual) else OcticDual.from_form(q)


def hq_ternary(q) -> Form:
    """H_q(u, v, w) = [q, (u x^2 + v xy + w y^2)^4] as a ternary quartic."""
    d = _as_octic(q).d
    u, v, w = (Form.var(3, k) for k in range(3))
    parts = [
        d[0] * u**4,
        4 * d[1] * u**3 * v,
        d[2] * (6 * u**2 * v**2 + 4 * u**3 * w),
        d[3] * (4 * u * v**3 + 12 * u**2 * v * w),
        d[4] * (v**4 + 12 * u * v**2 * w + 6 * u**2 * w**2),
        d[5] * (4 * v**3 * w + 12 * u * v * w**2),
        d[6] * (6 * v**2 * w**2 + 4 * u * w**3),
        4 * d[7] * v * w**3,
        d[8] * w**4,
    ]
    out = Form.zero(3, 4)
    for f in parts:
        out = out + f
    return out


def hp_form(p: Form, u: int, v: int) -> Form:
    """The Waring dual H_p in the N(n, u) coefficients of a degree-u form.

    H_p(t) = [p, g^(2v)] where g = sum_l t(l) x^l over l in I(n, u), so
    p lies in the dual of the sums of 2v-th powers of degree-u forms iff H_p is psd.
    Variables are ordered as index_set(n, u).
    """
    if p.degree != 2 * u * v:
        raise FormError(f"degree {p.degree} is not 2uv = {2 * u * v}")
    ells = index_set(p.nvars, u)
    N = len(ells)
    n = p.nvars
    terms = {}
    # each multiset of 2v indices contributes c(m) a(p; sum of its l's)
    for combo in combinations_with_replacement(range(N), 2 * v):
        m = [0] * N
        for k in combo:
            m[k] += 1
        total = tuple(sum(ells[k][j] for k in combo) for j in range(n))
        a = p.a(total)
        if a != 0:
            terms[tuple(m)] = multinomial(m) * a
    return Form(N, 2 * v, terms)


def wdual_boundary_test(q) -> Decision:
    """W* test for octics of the shape with d_3 = d_4 = d_5 = 0.

    H_q is then quadratic in v, so it is psd iff the coefficient of v^2 is psd
    and its discriminant form in (u, w) is psd.
    """
    d = _as_octic(q).d
    cone = "W*"
    if any(d[k] != 0 for k in (3, 4, 5)):
        return Decision(UNKNOWN, cone, "only octics with d_3 = d_4 = d_5 = 0 are decided",
                        {"d": d})
    u, w = xy()
    lead = 6 * d[2] * u**2 + 6 * d[6] * w**2
    const = d[0] * u**4 + 4 * d[2] * u**3 * w + 4 * d[6] * u * w**3 + d[8] * w**4
    mid = 2 * d[1] * u**3 + 2 * d[7] * w**3
    disc = lead * const - mid * mid
    ev = {"discriminant_form": disc}
    # coefficient of v^2 must be psd, so d_2, d_6 >= 0
    if tower_sign(d[2]) < 0 or tower_sign(d[6]) < 0:
        return Decision(OUTSIDE, cone, "coefficient of v^2 is not psd", ev)
    if lead.is_zero():
        if not mid.is_zero():
            return Decision(OUTSIDE, cone, "H_q is linear in v with a nonzero slope", ev)
        if const.is_zero():
            return Decision(BOUNDARY, cone, "q = 0", ev)
        st = binary_psd_status(const)
    else:
        if not const.is_zero() and binary_psd_status(const).tag is INDEFINITE:
            return Decision(OUTSIDE, cone, "H_q(u, 0, w) is not psd", ev)
        if disc.is_zero():
            st = None
        else:
            st = binary_psd_status(disc)
    if st is not None and st.tag is INDEFINITE:
        return Decision(OUTSIDE, cone, "discriminant form is not psd", {**ev, "psd_status": st})
    # every q of this shape has H_q(0, 1, 0) = d_4 = 0, so members sit on the boundary
    return Decision(BOUNDARY, cone, "discriminant form is psd and [q, x^4 y^4] = 0",
                    {**ev, "psd_status": st})


def omega_alpha(alpha) -> Form:
    """x^8 + 28 x^2 y^6 + 24 alpha x y^7 + 3(1 + 2 alpha^2) y^8."""
    a = _q(alpha)
    return Form(2, 8, {(8, 0): 1, (2, 6): 28, (1, 7): 24 * a, (0, 8): 3 * (1 + 2 * a * a)})


# -- even symmetric octics -------------------------------------------------------------

@dataclass(frozen=True)
class EvenSymmetricOctic:
    """((A, B, C)) = A x^8 + B x^6 y^2 + C x^4 y^4 + B x^2 y^6 + A y^8."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __post_init__(self):
        for name in ("A", "B", "C"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    def form(self) -> Form:
        return eso_form(self.A, self.B, self.C)

    @classmethod
    def from_form(cls, p: Form) -> "EvenSymmetricOctic":
        if p.nvars != 2 or p.degree != 8:
            raise FormError("a binary octic is required")
        A, B, C = p.coefficient((8, 0)), p.coefficient((6, 2)), p.coefficient((4, 4))
        e = cls(A, B, C)
        if e.form() != p:
            raise FormError("octic is not even symmetric")
        return e

    def to_json(self):
        from .serialize import jsonable

        return {"A": jsonable(self.A), "B": jsonable(self.B), "C": jsonable(self.C)}


def eso_form(A, B, C) -> Form:
    A, B, C = _q(A), _q(B), _q(C)
    return Form(2, 8, {(8, 0): A, (6, 2): B, (4, 4): C, (2, 6): B, (0, 8): A})


def eso_inner(p1: EvenSymmetricOctic, p2: EvenSymmetricOctic):
    return 2 * p1.A * p2.A + p1.B * p2.B / 14 + p1.C * p2.C / 70


def psi_lambda(lam) -> EvenSymmetricOctic:
    """((1, 6 lam^2 - 4, lam^4 - 12 lam^2 + 6)) = average of (x^2 +- lam xy - y^2)^4."""
    lam = _q(lam)
    l2 = lam * lam
    return EvenSymmetricOctic(1, 6 * l2 - 4, l2 * l2 - 12 * l2 + 6)


def wtilde_membership(p: EvenSymmetricOctic) -> Decision:
    A, B, C = p.A, p.B, p.C
    cone = "Wtilde"
    sA = tower_sign(A)
    if sA < 0:
        return Decision(OUTSIDE, cone, "A < 0 (p(1, 0) is negative)", {"A": A})
    if sA == 0:
        if B == 0 and tower_sign(C) >= 0:
            return Decision(BOUNDARY, cone, "A = B = 0, C >= 0 (multiple of x^4 y^4)", {"C": C})
        return Decision(OUTSIDE, cone, "A = 0 requires B = 0 and C >= 0", {"B": B, "C": C})
    face = B + 4 * A
    parab = 36 * A * C - (B * B - 64 * A * B - 56 * A * A)
    s_face, s_parab = tower_sign(face), tower_sign(parab)
    ev = {"B+4A": face, "36AC-(B^2-64AB-56A^2)": parab}
    if s_face < 0:
        return Decision(OUTSIDE, cone, "violates B >= -4A", ev)
    if s_parab < 0:
        return Decision(OUTSIDE, cone, "violates 36AC >= B^2 - 64AB - 56A^2", ev)
    if s_face == 0 or s_parab == 0:
        tight = [n for n, s in (("B = -4A", s_face), ("36AC = B^2 - 64AB - 56A^2", s_parab)) if s == 0]
        return Decision(BOUNDARY, cone, "tight: " + ", ".join(tight), ev)
    return Decision(INTERIOR, cone, "all inequalities strict", ev)


@dataclass(frozen=True)
class TwoSquares:
    """p = scale * (q1^2 + q2^2) with q1, q2 psd binary quartics."""

    branch: str
    scale: Fraction
    q1: Form
    q2: Form
    target: Form
    params: dict

    def residual(self) -> Form:
        return self.target - (self.q1 * self.q1 + self.q2 * self.q2) * self.scale

    def factors_psd(self) -> bool:
        return all(q.is_zero() or binary_psd_status(q).tag is not INDEFINITE
                   for q in (self.q1, self.q2))

    def verify(self) -> bool:
        return tower_sign(self.scale) >= 0 and self.residual().is_zero() and self.factors_psd()

    def certificate(self) -> Certificate:
        terms = tuple((self.scale, q, 2) for q in (self.q1, self.q2) if not q.is_zero())
        return Certificate(f"two psd squares ({self.branch} branch)", self.target, terms, ("x", "y"),
                           {"branch": self.branch, **self.params})


def two_square_decomposition(p: EvenSymmetricOctic) -> TwoSquares:
    """Write a member of Wtilde as scale * (q1^2 + q2^2) with psd quartics q1, q2."""
    verdict = wtilde_membership(p)
    if verdict.verdict is OUTSIDE:
        raise WaringError(f"not a member: {verdict.reason}")
    x, y = xy()
    target = p.form()
    A, B, C = p.A, p.B, p.C
    x2y2 = x * x * y * y
    if A == 0:
        return TwoSquares("ray", Fraction(1), tower_sqrt(C) * x2y2, Form.zero(2, 4), target, {"C": C})
    b, c = B / A, C / A
    alpha2 = (b + 4) / 6
    T = c - alpha2 * alpha2 + 12 * alpha2 - 6
    params = {"alpha^2": alpha2, "T": T}
    slack = T - 8 * alpha2 * alpha2
    if tower_sign(slack) >= 0:
        q1 = x**4 + (3 * alpha2 - 2) * x2y2 + y**4
        q2 = tower_sqrt(slack) * x2y2
        out = TwoSquares("rational", A, q1, q2, target, params)
    else:
        root = tower_sqrt(alpha2 * alpha2 + T)
        lam = (3 * alpha2 - root) / 2
        mu = 3 * (root - alpha2) / 2
        s = tower_sqrt(lam, over=getattr(root, "chain", ()))
        q1 = (x * x - s * x * y - y * y) ** 2 + mu * x2y2
        q2 = (x * x + s * x * y - y * y) ** 2 + mu * x2y2
        out = TwoSquares("tower", A / 2, q1, q2, target, {**params, "lambda": lam, "mu": mu})
    assert out.residual().is_zero(), "two-square identity failed"
    return out


# -- binary quartics (u = 1) -----------------------------------------------------------

@dataclass(frozen=True)
class QuarticSquares:
    """f_lam = scale * (f o M)^2 + scale * (g o M)^2 with psd quadratics."""

    lam: Fraction
    f: Form
    g: Form
    scale: Fraction

    def target(self) -> Form:
        return f_lambda(self.lam)

    def verify(self) -> bool:
        ok = (self.target() - (self.f * self.f + self.g * self.g) * self.scale).is_zero()
        return ok and all(q.is_zero() or binary_psd_status(q).tag is not INDEFINITE
                          for q in (self.f, self.g))

    def certificate(self) -> Certificate:
        terms = tuple((self.scale, q, 2) for q in (self.f, self.g) if not q.is_zero())
        return Certificate(f"f_lambda as two psd squares, lambda={self.lam}", self.target(), terms,
                           ("x", "y"))


def quartic_decomposition(lam) -> QuarticSquares:
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise WaringError("f_lambda is a sum of 4th powers only for lambda in [0, 1]")
    x, y = xy()
    if lam <= Fraction(1, 3):
        f = x * x + 3 * lam * y * y
        g = tower_sqrt(1 - 9 * lam * lam) * y * y
        return QuarticSquares(lam, f, g, Fraction(1))
    # f_mu o R = (2 + 6 mu) f_lam for mu = T(lam) in [0, 1/3)
    mu = map_T(lam)
    base = quartic_decomposition(mu)
    from .forms import compose

    return QuarticSquares(lam, compose(base.f, ROTATION), compose(base.g, ROTATION), 1 / (2 + 6 * mu))


def quartic_fourth_powers(lam) -> Certificate:
    """f_lam = 1/18((sqrt3 x + sqrt(3 lam) y)^4 + (sqrt3 x - sqrt(3 lam) y)^4) + (1 - lam^2) y^4."""
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise WaringError("f_lambda is a sum of 4th powers only for lambda in [0, 1]")
    x, y = xy()
    r3 = tower_sqrt(Fraction(3))
    r3l = tower_sqrt(3 * lam, over=getattr(r3, "chain", ()))
    terms = [
        (Fraction(1, 18), r3 * x + r3l * y, 4),
        (Fraction(1, 18), r3 * x - r3l * y, 4),
    ]
    if lam != 1:
        terms.append((1 - lam * lam, y, 4))
    return Certificate(f"f_lambda as 4th powers, lambda={lam}", f_lambda(lam), tuple(terms), ("x", "y"))


def flam_product_membership(lam, mu) -> Decision:
    """(x^4 + lam x^2y^2 + y^4)(x^4 + mu x^2y^2 + y^4) in W.

    Decided by (17 - 12 sqrt2)(lam + 2) <= mu + 2 <= (17 + 12 sqrt2)(lam + 2);
    the product is the even symmetric octic ((1, lam + mu, 2 + lam mu)).
    """
    lam, mu = Fraction(lam), Fraction(mu)
    if lam < -2 or mu < -2:
        raise WaringError("lambda and mu must be >= -2")
    r2 = tower_sqrt(Fraction(2))
    s, t = lam + 2, mu + 2
    lo = tower_sign(t - (17 - 12 * r2) * s)
    hi = tower_sign((17 + 12 * r2) * s - t)
    ev = {"mu+2-(17-12sqrt2)(lambda+2)": lo, "(17+12sqrt2)(lambda+2)-(mu+2)": hi,
          "octic": EvenSymmetricOctic(1, lam + mu, 2 + lam * mu)}
    if lo < 0 or hi < 0:
        return Decision(OUTSIDE, "W", "ratio (mu+2)/(lambda+2) outside [17-12sqrt2, 17+12sqrt2]", ev)
    if lo == 0 or hi == 0:
        return Decision(BOUNDARY, "W", "ratio at an endpoint", ev)
    return Decision(INTERIOR, "W", "ratio strictly inside", ev)


# -- certificates -----------------------------------------------------------------------

def _uvw():
    return tuple(Form.var(3, k) for k in range(3))


def _eso_dual(d0, d2, d4) -> OcticDual:
    return OcticDual((d0, 0, d2, 0, d4, 0, d2, 0, d0))


def dual_octic_certificates(lam) -> list[Certificate]:
    """psd certificates of H_q for the three dual octics ((1,0,0)), ((4,28,0)) and the lam family."""
    lam = Fraction(lam)
    u, v, w = _uvw()
    names = ("u", "v", "w")
    l2 = lam * lam
    c1 = Certificate("H_q for q = ((1,0,0))", hq_ternary(_eso_dual(1, 0, 0)),
                     ((1, u, 4), (1, w, 4)), names)
    c2 = Certificate(
        "H_q for q = ((4,28,0))",
        hq_ternary(_eso_dual(4, 1, 0)),
        (
            (Fraction(4), (u + w) * (u - w / 2), 2),
            (Fraction(3), (u + w) * w, 2),
            (Fraction(6), u * v, 2),
            (Fraction(6), w * v, 2),
        ),
        names,
    )
    d0 = 6 - 4 * l2 + 3 * l2 * l2
    c3 = Certificate(
        f"2 H_q for q = ((6-4l^2+3l^4, 28(6-l^2), 420)), l={lam}",
        hq_ternary(_eso_dual(d0, 6 - l2, 6)) * 2,
        (
            (Fraction(48), (u + w) * v, 2),
            (4 * l2, u + w, 4),
            (3 * l2 * l2, u * u - w * w, 2),
            (Fraction(3), 2 * v * v + 2 * (u + w) ** 2 - l2 * (u * u + w * w), 2),
        ),
        names,
    )
    return [c1, c2, c3]


def omega_certificate(alpha) -> Certificate:
    """H_{omega_alpha} = 6(vw + alpha w^2)^2 + ((u+w)(u-w))^2 + 2((u+w) w)^2."""
    a = Fraction(alpha)
    u, v, w = _uvw()
    return Certificate(
        f"H_q for q = omega_alpha, alpha={a}",
        hq_ternary(omega_alpha(a)),
        ((Fraction(6), v * w + a * w * w, 2), (Fraction(1), (u + w) * (u - w), 2),
         (Fraction(2), (u + w) * w, 2)),
        ("u", "v", "w"),
    )


def h22_certificates() -> list[Certificate]:
    x, y = xy()
    target = (x * x + y * y) ** 2
    r3 = tower_sqrt(Fraction(3))
    sq = Certificate("(x^2+y^2)^2 as two squares", target,
                     ((Fraction(1), x * x - y * y, 2), (Fraction(1), 2 * x * y, 2)), ("x", "y"))
    fourth = Certificate(
        "(x^2+y^2)^2 as three 4th powers",
        target,
        ((Fraction(1, 18), r3 * x + y, 4), (Fraction(1, 18), r3 * x - y, 4), (Fraction(16, 18), y, 4)),
        ("x", "y"),
    )
    return [sq, fourth]


def h24_certificate() -> Certificate:
    x, y = xy()
    r3 = tower_sqrt(Fraction(3))
    terms = [(Fraction(256), x, 8), (Fraction(256), y, 8)]
    for sgn in (1, -1):
        terms.append((Fraction(1), x + sgn * r3 * y, 8))
        terms.append((Fraction(1), r3 * x + sgn * y, 8))
    return Certificate("420 (x^2+y^2)^4 as 8th powers", 420 * (x * x + y * y) ** 4, tuple(terms),
                       ("x", "y"))


def becker_certificate() -> Certificate:
    """3(3x^4 - 4x^2y^2 + 3y^4)(x^2+y^2)^4 as a sum of 4th powers of cubics."""
    x, y = xy()
    target = 3 * (3 * x**4 - 4 * x * x * y * y + 3 * y**4) * (x * x + y * y) ** 4
    terms = (
        (Fraction(2), (x - y) * x * x, 4),
        (Fraction(2), (x + y) * x * x, 4),
        (Fraction(2), (x - y) * y * y, 4),
        (Fraction(2), (x + y) * y * y, 4),
        (Fraction(5), x**3, 4),
        (Fraction(11), x * x * y, 4),
        (Fraction(11), x * y * y, 4),
        (Fraction(5), y**3, 4),
    )
    return Certificate("(x^2+y^2)^4 f_(-2/9) scaled, as 4th powers of cubics", target, terms, ("x", "y"))


DUAL_OCTIC_LAMBDAS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(-2), Fraction(7, 3))


def certificate_suite() -> list[Certificate]:
    out = h22_certificates() + [h24_certificate(), becker_certificate()]
    for lam in DUAL_OCTIC_LAMBDAS:
        cs = dual_octic_certificates(lam)
        out.extend(cs if lam == DUAL_OCTIC_LAMBDAS[0] else cs[2:])
    out.extend(omega_certificate(a) for a in (0, Fraction(1, 2), -3))
    out.extend(psi_certificate(r) for r in (Fraction(-1, 3), Fraction(-1, 4), Fraction(-1, 10), 0))
    out.extend(quartic_fourth_powers(l) for l in (0, Fraction(1, 4), Fraction(1, 2), 1))
    return out


def hq_value_oracle(q, point) -> Fraction:
    """[q, (u x^2 + v xy + w y^2)^4] straight from the inner product."""
    from .forms import inner_product

    u, v, w = (Fraction(c) for c in point)
    x, y = xy()
    return inner_product(_as_octic(q).form(), (u * x * x + v * x * y + w * y * y) ** 4)

