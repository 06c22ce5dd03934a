"""Convex binary forms: the Theta criterion and its consequences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .forms import (
    Form,
    FormError,
    binary_a,
    binary_divide,
    binary_form,
    binary_raw,
    compose,
    diff,
    float_evaluator,
    hessian_biform,
)
from .realroots import (
    INDEFINITE,
    POSITIVE_DEFINITE,
    PSD_WITH_ZEROS,
    PsdStatus,
    binary_psd_status,
    q_membership,
)
from .tower import TowerScalar, tower_sign, tower_sqrt
from .verdicts import BOUNDARY, INTERIOR, OUTSIDE, UNKNOWN, Decision


def _x_y():
    return Form.var(2, 0), Form.var(2, 1)


def _binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def theta(p: Form) -> Form:
    """Theta_p, of degree 4r - 4, with (2r)^2 (2r-1)^2 Theta_p = p_xx p_yy - p_xy^2."""
    if p.nvars != 2:
        raise FormError("theta needs a binary form")
    if p.degree < 2 or p.degree % 2:
        raise FormError("theta needs even degree 2r >= 2")
    R = p.degree // 2
    a = binary_a(p)
    n = 2 * R - 2

    def A(i):
        return a[i] if 0 <= i <= 2 * R else 0

    raw = []
    for m in range(4 * R - 3):
        bm = Fraction(0)
        for j in range(2 * R):
            w = _binom(n, j) * _binom(n, m - j) - _binom(n, j - 1) * _binom(n, m - j + 1)
            if w:
                aj, ak = A(j), A(m + 2 - j)
                if aj != 0 and ak != 0:
                    bm = bm + w * aj * ak
        raw.append(bm)
    return binary_form(raw)


def hessian_determinant(p: Form) -> Form:
    px, py = diff(p, 0), diff(p, 1)
    return diff(px, 0) * diff(py, 1) - diff(px, 1) * diff(px, 1)


def theta_scale(p: Form) -> int:
    d = p.degree
    return d * d * (d - 1) * (d - 1)


def theta_identity_holds(p: Form) -> bool:
    return (theta(p) * theta_scale(p) - hessian_determinant(p)).is_zero()


def convex_status(p: Form) -> Decision:
    """Membership in K_{2,2r}: p psd and Theta_p psd; interior iff Theta_p pd."""
    if p.nvars != 2:
        raise FormError("convex_status is exact for binary forms only")
    cone = f"K_(2,{p.degree})"
    if p.is_zero():
        return Decision(BOUNDARY, cone, "zero form")
    if p.degree % 2:
        return Decision(OUTSIDE, cone, "odd degree forms are not psd")
    ps = binary_psd_status(p)
    if ps.tag is INDEFINITE:
        return Decision(OUTSIDE, cone, "form is not psd", {"psd_status": ps})
    if p.degree == 0:
        return Decision(INTERIOR, cone, "positive constant", {"psd_status": ps})
    th = theta(p)
    ev = {"psd_status": ps, "theta": th}
    if th.is_zero():
        return Decision(BOUNDARY, cone, "Theta vanishes identically (power of a linear form)", ev)
    ts = binary_psd_status(th)
    ev["theta_status"] = ts
    if ts.tag is INDEFINITE:
        return Decision(OUTSIDE, cone, "Theta is indefinite", ev)
    if ts.tag is PSD_WITH_ZEROS:
        return Decision(BOUNDARY, cone, "Theta is psd with real zeros", ev)
    return Decision(INTERIOR, cone, "Theta is positive definite", ev)


# -- trinomials ----------------------------------------------------------------------

def product_form(r: int, a) -> Form:
    """(x^2 + y^2)^r (x^2 + a y^2)."""
    x, y = _x_y()
    return (x * x + y * y) ** r * (x * x + y * y * a)


def trinomial_bound(r: int):
    """The two roots of a + 1/a = 8r + 18 + 8/r, as tower scalars (lo, hi)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    S = Fraction(8 * r + 18) + Fraction(8, r)
    root = tower_sqrt(S * S - 4)
    return (S - root) / 2, (S + root) / 2


def trinomial_convexity(r: int, a) -> Decision:
    """Convexity of (x^2+y^2)^r (x^2 + a y^2), by the exact bound and by Theta."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if not isinstance(a, TowerScalar):
        a = Fraction(a)
    if tower_sign(a) <= 0:
        raise ValueError("a must be positive")
    S = Fraction(8 * r + 18) + Fraction(8, r)
    gap = a + 1 / a - S
    sign = tower_sign(gap)
    bound_v = {-1: INTERIOR, 0: BOUNDARY, 1: OUTSIDE}[sign]
    general = convex_status(product_form(r, a))
    if general.verdict is not bound_v:
        raise AssertionError(f"bound path {bound_v} disagrees with Theta path {general.verdict}")
    return Decision(bound_v, f"K_(2,{2 * r + 2})", "a + 1/a compared with 8r + 18 + 8/r",
                    {"a+1/a-(8r+18+8/r)": gap, "sign": sign, "theta_verdict": general.verdict})


def general_trinomial(r: int, v: int, a, b, c) -> Form:
    """a x^(2r) + b x^(2r-v) y^v + c y^(2r)."""
    if not 1 <= v <= 2 * r - 1:
        raise ValueError("need 1 <= v <= 2r - 1")
    raw = [Fraction(0)] * (2 * r + 1)
    raw[0], raw[v], raw[2 * r] = a, b, c
    return binary_form(raw)


def general_trinomial_convexity(r: int, v: int, a, b, c) -> Decision:
    return convex_status(general_trinomial(r, v, a, b, c))


def mess_identity(r, a) -> Form:
    """LHS minus RHS of the trinomial quartic identity (should be the zero form).

    4(1+r)(a+r) q = (2(1+r)(a+r) x^2 + beta y^2)^2 + a r^2 (a-1)^2 (S - a - 1/a) y^4
    with beta = 2a - r + 6ar - a^2 r + 2ar^2 and S = 8r + 18 + 8/r.
    """
    r, a = Fraction(r), Fraction(a)
    x, y = _x_y()
    beta = 2 * a - r + 6 * a * r - a * a * r + 2 * a * r * r
    q = x**4 * ((1 + r) * (a + r)) + x * x * y * y * beta + y**4 * (a * (1 + r) * (1 + a * r))
    S = 8 * r + 18 + 8 / r
    rhs = (x * x * (2 * (1 + r) * (a + r)) + y * y * beta) ** 2 + y**4 * (a * r * r * (a - 1) ** 2 * (S - a - 1 / a))
    return q * (4 * (1 + r) * (a + r)) - rhs


def trinomial_quartic(r, a) -> Form:
    r, a = Fraction(r), Fraction(a)
    x, y = _x_y()
    beta = 2 * a - r + 6 * a * r - a * a * r + 2 * a * r * r
    return x**4 * ((1 + r) * (a + r)) + x * x * y * y * beta + y**4 * (a * (1 + r) * (1 + a * r))


# -- families ---------------------------------------------------------------------

def hrk_family(r: int, k: int) -> Form:
    """h_{r,k}: a boundary trinomial of K_{2,2r}."""
    if not 1 <= k <= r - 1:
        raise ValueError("need 1 <= k <= r - 1")
    c0 = (r - k) * (2 * (r - k) - 1) ** 2
    c1 = r * (2 * r - 1) * (2 * k - 1) * (2 * r - 2 * k - 1)
    c2 = k * (2 * k - 1) ** 2
    return general_trinomial(r, 2 * k, c0, c1, c2)


def hrk_theta_factor(r: int, k: int) -> tuple[Form, PsdStatus]:
    """Theta_{h_{r,k}} / (x^(2r-2-2k) y^(2k-2) (x^2-y^2)^2) and its psd status."""
    x, y = _x_y()
    th = theta(hrk_family(r, k))
    div = x ** (2 * r - 2 - 2 * k) * y ** (2 * k - 2) * (x * x - y * y) ** 2
    g = binary_divide(th, div)
    return g, binary_psd_status(g)


def q_lambda(lam) -> Form:
    lam = Fraction(lam)
    return binary_form([1, 6 * lam, 15 * lam**2, 20 * lam**3, 15 * lam**2, 6 * lam, 1])


def c_lambda(lam) -> Form:
    """Theta_{q_lam} = (1 - lam^2) x^2 y^2 C_lam."""
    lam = Fraction(lam)
    return binary_form([6 * lam**2, 4 * lam + 20 * lam**3, 1 + 15 * lam**2 + 20 * lam**4,
                        4 * lam + 20 * lam**3, 6 * lam**2])


def d_lambda(lam) -> Form:
    return compose(c_lambda(lam), ((1, 1), (1, -1)))


def even_quartic_psd(c0, c2, c4) -> bool:
    """c0 x^4 + c2 x^2 y^2 + c4 y^4 >= 0 everywhere."""
    if c0 < 0 or c4 < 0:
        return False
    return c2 >= 0 or c2 * c2 <= 4 * c0 * c4


def q_lambda_analysis(lam) -> dict:
    """Independent membership decision for q_lam through C_lam and D_lam."""
    lam = Fraction(lam)
    d = binary_raw(d_lambda(lam))
    disc = d[2] * d[2] - 4 * d[0] * d[4]
    if abs(lam) == 1:
        member = True  # q is a sixth power, Theta = 0
    elif abs(lam) > 1:
        member = False
    else:
        member = even_quartic_psd(d[0], d[2], d[4])
    return {"D_coeffs": (d[0], d[2], d[4]), "discriminant": disc,
            "discriminant_formula": -128 * lam**2 * (1 - lam**2) * (1 - 10 * lam**2),
            "member": member}


def q_lambda_status(lam) -> Decision:
    lam = Fraction(lam)
    dec = convex_status(q_lambda(lam))
    ana = q_lambda_analysis(lam)
    if dec.is_member != ana["member"]:
        raise AssertionError("Theta verdict disagrees with the C/D analysis")
    return Decision(dec.verdict, dec.cone, dec.reason, {**dec.evidence, "analysis": ana})


# -- extremal sextics ------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalMatch:
    kind: str  # "q_lambda", "power", "none" or "unknown"
    lam: Fraction | None = None
    matrix: tuple | None = None
    detail: str = ""


def match_extremal_k26(p: Form) -> ExtremalMatch:
    """Try to recognise p as q_lam o M (up to q_lam ~ q_-lam), 0 < lam <= 1/2."""
    if p.nvars != 2 or p.degree != 6:
        raise FormError("a binary sextic is required")
    if binary_psd_status(p).tag is INDEFINITE:
        raise ValueError("match_extremal_k26 needs a psd sextic")
    th = theta(p)
    if th.is_zero():
        return ExtremalMatch("power", detail="Theta vanishes: sixth power of a linear form")
    ts = binary_psd_status(th)
    if ts.tag is not PSD_WITH_ZEROS:
        return ExtremalMatch("none", detail=f"Theta is {ts.tag}")
    exact = [z.point for z in ts.zeros if z.is_exact]
    inexact = [z for z in ts.zeros if not z.is_exact]
    for z1 in exact:
        for z2 in exact:
            if z1 is z2:
                continue
            M = ((z1[0], z2[0]), (z1[1], z2[1]))
            if M[0][0] * M[1][1] - M[0][1] * M[1][0] == 0:
                continue
            lam = _normalized_lambda(compose(p, M))
            if lam is not None:
                return ExtremalMatch("q_lambda", lam, M, "zeros of Theta moved to (1,0) and (0,1)")
    if inexact:
        return ExtremalMatch("unknown", detail="Theta has irrational zeros")
    return ExtremalMatch("none", detail="no pair of Theta zeros gives the q_lambda normal form")


def _normalized_lambda(P: Form):
    a = binary_a(P)
    if any(isinstance(v, TowerScalar) for v in a):
        return None
    if a[0] <= 0 or a[6] <= 0:
        return None
    r = a[1] / a[0]
    s = a[5] / a[6]
    ok = (a[2] == r * r * a[0] and a[3] == r**3 * a[0] and a[3] == s**3 * a[6] and a[4] == s * s * a[6])
    if not ok:
        return None
    rs = r * s
    if rs <= 0:
        return None
    from .tower import rational_sqrt

    lam = rational_sqrt(rs)
    if lam is None or lam > Fraction(1, 2):
        return None
    return lam


# -- convexification ---------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexifyResult:
    N: int
    theta: Form
    verdict: object
    estimate: float
    T: float
    U: float
    history: tuple = field(default=(), compare=False)


def sampled_bounds(p: Form, grid: int = 4096) -> tuple[float, float]:
    """Sampled sup over the unit circle of |grad p|/p and ||Hess p||/p."""
    from scipy.optimize import minimize_scalar

    f = float_evaluator(p)
    gx, gy = float_evaluator(diff(p, 0)), float_evaluator(diff(p, 1))
    hxx, hxy, hyy = (float_evaluator(diff(diff(p, i), j)) for i, j in ((0, 0), (0, 1), (1, 1)))

    def ratios(theta_vals):
        th = np.atleast_1d(theta_vals)
        pts = np.stack([np.cos(th), np.sin(th)], axis=1)
        pv = f(pts)
        g = np.hypot(gx(pts), gy(pts)) / pv
        a, b, c = hxx(pts), hxy(pts), hyy(pts)
        spec = np.abs((a + c) / 2) + np.sqrt(((a - c) / 2) ** 2 + b * b)
        return g, spec / pv

    th = np.linspace(0.0, math.pi, grid, endpoint=False)  # p is even
    g, h = ratios(th)
    out = []
    step = math.pi / grid
    for vals, idx in ((g, 0), (h, 1)):
        best = float(vals.max())
        for k in np.argsort(vals)[-4:]:
            c = th[k]
            res = minimize_scalar(lambda t: -ratios(t)[idx][0], bounds=(c - step, c + step),
                                  method="bounded", options={"xatol": 1e-12})
            best = max(best, float(-res.fun))
        out.append(best)
    return out[0], out[1]


def convexify(p: Form, n_max: int = 64) -> ConvexifyResult:
    """Least N with (x^2+y^2)^N p convex, certified by Theta."""
    if binary_psd_status(p).tag is not POSITIVE_DEFINITE:
        raise ValueError("convexify needs a positive definite form")
    T, U = sampled_bounds(p)
    est = (T * T + U) / 2
    x, y = _x_y()
    base = x * x + y * y
    pN = p
    hist = []
    for N in range(n_max + 1):
        dec = convex_status(pN)
        hist.append(dec.verdict)
        if dec.verdict is not OUTSIDE:
            return ConvexifyResult(N, theta(pN), dec.verdict, est, T, U, tuple(hist))
        pN = pN * base
    raise RuntimeError(f"no convex multiple found up to N = {n_max}")


# -- the (A, B) sextic section --------------------------------------------------------

def g_ab(A, B) -> Form:
    """x^6 + 15A x^4 y^2 + 15B x^2 y^4 + y^6."""
    A, B = Fraction(A), Fraction(B)
    return binary_form([1, 0, 15 * A, 0, 15 * B, 0, 1])


@dataclass(frozen=True)
class SectionVerdicts:
    A: Fraction
    B: Fraction
    P: Decision
    Q: Decision
    K: Decision

    def codes(self) -> tuple[str, str, str]:
        return self.P.verdict.code, self.Q.verdict.code, self.K.verdict.code


def sextic_section(A, B) -> SectionVerdicts:
    p = g_ab(A, B)
    P = binary_psd_status(p).as_decision("P_(2,6)")
    Q = q_membership(p)
    K = convex_status(p)
    return SectionVerdicts(Fraction(A), Fraction(B), P, Q, K)


def q_section_expected(A, B):
    """Q verdict predicted by the two parabolas A >= B^2, B >= A^2."""
    A, B = Fraction(A), Fraction(B)
    u, v = A - B * B, B - A * A
    if u < 0 or v < 0:
        return OUTSIDE
    if u == 0 or v == 0:
        return BOUNDARY
    return INTERIOR


def k_axis_status(a_cubed) -> Decision:
    """K verdict for g_{A,0} given A^3 exactly (covers A = 12^(-1/3)).

    Theta(g_{A,0}) = x^2 (A X^3 - 10A^2 X^2 + X + 6A) y^6 with X = x^2/y^2; the
    cubic has discriminant 4A(12A^3 - 1)(500A^3 + 1), so for A > 0 its positive
    roots appear exactly when 12A^3 >= 1 (double root at equality).
    """
    c = Fraction(a_cubed)
    ev = {"A^3": c, "sign(12A^3-1)": tower_sign(12 * c - 1)}
    if c < 0:
        return Decision(OUTSIDE, "K_(2,6)", "leading coefficient of the Theta cubic is negative", ev)
    if c == 0:
        return Decision(BOUNDARY, "K_(2,6)", "x^6 + y^6", ev)
    if 12 * c - 1 > 0:
        return Decision(OUTSIDE, "K_(2,6)", "Theta cubic has positive simple roots", ev)
    return Decision(BOUNDARY, "K_(2,6)", "Theta vanishes at (0,1); cubic has no positive simple root", ev)


def psi_curve(lam: float) -> float:
    """The K-section boundary parameter: the point (psi(lam), psi(-lam))."""
    l = float(lam)
    num = (1 - l) ** (2 / 3) * (1 + l) ** (1 / 3) * (1 + 2 * l)
    den = (1 + 5 * l + 10 * l * l) ** (2 / 3) * (1 - 5 * l + 10 * l * l) ** (1 / 3)
    return num / den


def psi_curve_max() -> tuple[float, float]:
    """Numerical maximum of psi on [-1/2, 1/2]: (lam*, psi(lam*))."""
    from scipy.optimize import minimize_scalar

    grid = np.linspace(-0.5, 0.5, 20001)
    vals = np.array([psi_curve(t) for t in grid])
    k = int(vals.argmax())
    res = minimize_scalar(lambda t: -psi_curve(t), bounds=(grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]),
                          method="bounded", options={"xatol": 1e-13})
    return float(res.x), float(-res.fun)


PSI_MAX_CLOSED_FORM = 5 ** (-5 / 3) * (1565 + 496 * math.sqrt(10)) ** (1 / 3)


def p_boundary_curve(r: float) -> tuple[float, float]:
    return ((1 / r**4 - 2 * r * r) / 15, (r**4 - 2 / (r * r)) / 15)


# -- numeric Hessian sampling ---------------------------------------------------------

@dataclass(frozen=True)
class HessianSample:
    violation: bool
    u: tuple | None = None
    v: tuple | None = None
    value: float | None = None

    def __str__(self):
        return f"Witness(u={self.u}, v={self.v}, value={self.value:.3e})" if self.violation else "NoViolation"


def hessian_sample_check(p: Form, trials: int = 10_000, seed: int = 0, tol: float = 1e-9,
                         batch: int = 4096) -> HessianSample:
    """Advisory floating search for (u, v) with Hes(p; u, v) < -tol."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = p.nvars
    H = float_evaluator(hessian_biform(p))
    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        u = rng.standard_normal((m, n))
        v = rng.standard_normal((m, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        vals = H(np.concatenate([u, v], axis=1))
        k = int(vals.argmin())
        if vals[k] < -tol:
            return HessianSample(True, tuple(u[k]), tuple(v[k]), float(vals[k]))
        done += m
    return HessianSample(False)


# -- the K_{2,8} example --------------------------------------------------------------

def k28_fixture() -> tuple[Form, Form]:
    """(x^2+y^2)^4 + (8/sqrt 7) x y (x^2-y^2)(x^2+y^2)^2 and its Theta."""
    x, y = _x_y()
    c = 8 / tower_sqrt(7)
    p = (x * x + y * y) ** 4 + (x * y * (x * x - y * y) * (x * x + y * y) ** 2) * c
    return p, theta(p)


def k28_expected_theta() -> Form:
    """Theta of the K_{2,8} example: (48/49) x^2 y^2 (x-y)^2 (x+y)^2 (x^2+y^2)^2."""
    x, y = _x_y()
    return (x * y * (x - y) * (x + y)) ** 2 * (x * x + y * y) ** 2 * Fraction(48, 49)


