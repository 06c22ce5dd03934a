"""Binary quartic blenders: invariants, the maps T and U, and the cones B_tau."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .certificates import Certificate
from .forms import Form, FormError, binary_a, binary_form, compose
from .realroots import INDEFINITE, POSITIVE_DEFINITE, binary_psd_status, catalecticant, kernel
from .tower import TowerScalar, tower_sign, tower_sqrt
from .univariate import isolate_real_roots, refine_interval, squarefree_decomposition, strip
from .verdicts import BOUNDARY, INTERIOR, OUTSIDE, Decision

ROTATION = ((1, 1), (1, -1))
TAU_MIN = Fraction(-1, 3)


@dataclass(frozen=True)
class QuarticInvariants:
    I: object
    J: object


def _need_quartic(p: Form):
    if p.nvars != 2 or p.degree != 4:
        raise FormError("a binary quartic is required")


def invariants(p: Form) -> QuarticInvariants:
    _need_quartic(p)
    a0, a1, a2, a3, a4 = binary_a(p)
    I = a0 * a4 - 4 * a1 * a3 + 3 * a2 * a2
    J = a0 * (a2 * a4 - a3 * a3) - a1 * (a1 * a4 - a3 * a2) + a2 * (a1 * a3 - a2 * a2)
    return QuarticInvariants(I, J)


def map_T(z):
    z = Fraction(z) if not isinstance(z, TowerScalar) else z
    den = 1 + 3 * z
    if den == 0:
        raise ZeroDivisionError("T has a pole at -1/3")
    return (1 - z) / den


def map_U(z):
    z = Fraction(z) if not isinstance(z, TowerScalar) else z
    den = 3 - 3 * z
    if den == 0:
        raise ZeroDivisionError("U has a pole at 1")
    return -(1 + 3 * z) / den


def f_lambda(lam) -> Form:
    """x^4 + 6 lam x^2 y^2 + y^4."""
    return binary_form([1, 0, 6 * _exact(lam), 0, 1])


def g_lambda(lam) -> Form:
    """f_lam(x + y, x - y)."""
    return compose(f_lambda(lam), ROTATION)


def _exact(v):
    return v if isinstance(v, TowerScalar) else Fraction(v)


def phi_squared(lam):
    """phi(lam)^2 = (lam - lam^3)^2 / (1 + 3 lam^2)^3, exactly."""
    lam = _exact(lam)
    return (lam - lam**3) ** 2 / (1 + 3 * lam * lam) ** 3


def phi(lam: float) -> float:
    lam = float(lam)
    return (lam - lam**3) / (1 + 3 * lam * lam) ** 1.5


def k_value(p: Form) -> float:
    """Floating K(p) = J / I^(3/2) for display; never used for decisions."""
    inv = invariants(p)
    return float(inv.J) / float(inv.I) ** 1.5


def _clear(lhs, rhs):
    if isinstance(lhs, TowerScalar) or isinstance(rhs, TowerScalar):
        return lhs, rhs
    m = lcm(Fraction(lhs).denominator, Fraction(rhs).denominator)
    return int(lhs * m), int(rhs * m)


def compare_k(p: Form, tau) -> tuple[int, dict]:
    """Exact sign of K(p) - phi(tau) for pd p.

    K(p) = J/I^(3/2) and phi(tau) = t/s^(3/2) with t = tau - tau^3 and
    s = 1 + 3 tau^2; since I, s > 0 this is the sign of J s^(3/2) - t I^(3/2),
    decided from the signs of J, t and the comparison of J^2 s^3 with t^2 I^3.
    """
    inv = invariants(p)
    tau = _exact(tau)
    t = tau - tau**3
    s = 1 + 3 * tau * tau
    lhs = inv.J * inv.J * s**3
    rhs = t * t * inv.I**3
    sj, st = tower_sign(inv.J), tower_sign(t)
    if sj != st:
        sign = 1 if sj > st else -1
    else:
        c = tower_sign(lhs - rhs)
        sign = c if sj >= 0 else -c
        if sj == 0:
            sign = 0
    L, R = _clear(lhs, rhs)
    return sign, {
        "I": inv.I,
        "J": inv.J,
        "J^2(1+3tau^2)^3": L,
        "(tau-tau^3)^2 I^3": R,
        "sign_J": sj,
        "sign_tau_term": st,
        "sign_K_minus_phi": sign,
    }


def check_tau(tau):
    tau = _exact(tau)
    if tower_sign(tau - TAU_MIN) < 0 or tower_sign(tau) > 0:
        raise ValueError(f"tau must lie in [-1/3, 0], got {tau}")
    return tau


def is_fourth_power(p: Form) -> bool:
    """p = c (alpha x + beta y)^4 with c > 0, via a rank-one Hankel matrix."""
    H = catalecticant(p)
    if p.is_zero():
        return False
    if len(kernel(H)) != 2:
        return False
    return binary_psd_status(p).tag is not INDEFINITE


def btau_membership(p: Form, tau) -> Decision:
    """Membership of a binary quartic in B_tau (tau in [-1/3, 0])."""
    _need_quartic(p)
    tau = check_tau(tau)
    cone = f"B_tau(tau={tau})"
    if p.is_zero():
        return Decision(BOUNDARY, cone, "zero form")
    st = binary_psd_status(p)
    if st.tag is INDEFINITE:
        return Decision(OUTSIDE, cone, "form is not psd", {"psd_status": st})
    if st.tag is not POSITIVE_DEFINITE:
        if is_fourth_power(p):
            return Decision(BOUNDARY, cone, "fourth power of a linear form", {"psd_status": st})
        if tau == TAU_MIN:
            return Decision(BOUNDARY, cone, "psd with a zero; B_{-1/3} = P", {"psd_status": st})
        return Decision(OUTSIDE, cone, "psd with a zero but not a fourth power; only B_{-1/3} contains it",
                        {"psd_status": st})
    sign, ev = compare_k(p, tau)
    v = {1: INTERIOR, 0: BOUNDARY, -1: OUTSIDE}[sign]
    return Decision(v, cone, "sign of K(p) - phi(tau)", ev)


def dual_tau(tau):
    tau = check_tau(tau)
    return map_U(tau)


def nu0():
    """The self-dual parameter 1 - sqrt(4/3)."""
    return 1 - tower_sqrt(Fraction(4, 3))


def self_dual_check() -> bool:
    v = nu0()
    return map_U(v) == v and tower_sign(v - TAU_MIN) > 0 and tower_sign(v) < 0


@dataclass(frozen=True)
class CanonicalLambda:
    value: Fraction | None
    poly: tuple | None = None
    interval: tuple | None = None
    sign: int = 0

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    def approx(self) -> float:
        if self.value is not None:
            return float(self.value)
        return (float(self.interval[0]) + float(self.interval[1])) / 2

    def to_json(self) -> dict:
        from .serialize import jsonable

        if self.value is not None:
            return {"value": jsonable(self.value), "sign": self.sign}
        return {"poly": jsonable(self.poly), "interval": jsonable(self.interval), "sign": self.sign}


def resolvent(inv: QuarticInvariants) -> list:
    """(lam - lam^3)^2 I^3 - J^2 (1 + 3 lam^2)^3 as coefficients in lam."""
    I3 = inv.I**3
    J2 = inv.J * inv.J
    a = [0, 0, 1, 0, -2, 0, 1]  # (lam - lam^3)^2
    b = [1, 0, 9, 0, 27, 0, 27]  # (1 + 3 lam^2)^3
    return strip([Fraction(ai) * I3 - bi * J2 for ai, bi in zip(a, b)])


def canonical_lambda(p: Form) -> CanonicalLambda:
    """The unique lam in (-1/3, 1/3] with p equivalent to f_lam."""
    _need_quartic(p)
    if binary_psd_status(p).tag is not POSITIVE_DEFINITE:
        raise ValueError("canonical_lambda needs a positive definite quartic")
    inv = invariants(p)
    sj = tower_sign(inv.J)
    if sj == 0:
        return CanonicalLambda(Fraction(0), sign=0)
    R = resolvent(inv)
    lo_b, hi_b = TAU_MIN, Fraction(1, 3)
    for s, _ in squarefree_decomposition(R):
        for item in isolate_real_roots(s):
            if item[0] == "exact":
                x = item[1]
                if lo_b < x <= hi_b and tower_sign(x) == sj:
                    return CanonicalLambda(Fraction(x), sign=sj)
                continue
            lo, hi = item[1], item[2]
            # shrink until the interval sits on one side of -1/3, 0 and 1/3
            while any(lo < c < hi for c in (lo_b, Fraction(0), hi_b)):
                lo, hi = refine_interval(s, lo, hi, (hi - lo) / 2)
                if lo == hi:
                    break
            if lo == hi:
                if lo_b < lo <= hi_b and tower_sign(lo) == sj:
                    return CanonicalLambda(lo, sign=sj)
                continue
            if lo >= lo_b and hi <= hi_b and (lo >= 0 if sj > 0 else hi <= 0):
                return CanonicalLambda(None, tuple(s), (lo, hi), sj)
    raise ArithmeticError("no canonical lambda found; input inconsistent")


# -- Psi and duality -------------------------------------------------------------------

def psi_value(a, b, c, d, r, s):
    """[f_r(x, y), f_s(ax + by, cx + dy)] in closed form."""
    a, b, c, d, r, s = (Fraction(v) for v in (a, b, c, d, r, s))
    return (
        a**4 + b**4 + c**4 + d**4
        + 6 * r * (a * a * b * b + c * c * d * d)
        + 6 * s * (a * a * c * c + b * b * d * d)
        + 6 * r * s * (a * a * d * d + 4 * a * b * c * d + b * b * c * c)
    )


def psi_form(r, s) -> Form:
    """Psi(a, b, c, d; r, s) as a quartic form in (a, b, c, d)."""
    r, s = Fraction(r), Fraction(s)
    A, B, C, D = (Form.var(4, k) for k in range(4))
    return (
        A**4 + B**4 + C**4 + D**4
        + (A * A * B * B + C * C * D * D) * (6 * r)
        + (A * A * C * C + B * B * D * D) * (6 * s)
        + (A * A * D * D + A * B * C * D * 4 + B * B * C * C) * (6 * r * s)
    )


def psi_certificate(r) -> Certificate:
    """Four weighted squares equal to 2(1 - r) Psi(.; r, U(r)) for r in [-1/3, 0]."""
    r = Fraction(r)
    if not (TAU_MIN <= r <= 0):
        raise ValueError("psi_certificate needs r in [-1/3, 0]")
    A, B, C, D = (Form.var(4, k) for k in range(4))
    target = psi_form(r, map_U(r)) * (2 * (1 - r))
    terms = (
        ((1 + r) * (1 + 3 * r), A * A + B * B - C * C - D * D, 2),
        (-4 * r, A * A + C * C - B * B - D * D, 2),
        ((1 + r) * (1 - 3 * r), A * A + D * D - B * B - C * C, 2),
        (-8 * r * (1 + 3 * r), A * B + C * D, 2),
    )
    return Certificate(f"2(1-r)Psi(a,b,c,d;r,U(r)) at r={r}", target, terms, ("a", "b", "c", "d"))


def duality_pairing(r, s, M1, M2):
    """[f_r o M1, f_s o M2], exactly."""
    from .forms import inner_product

    return inner_product(compose(f_lambda(r), M1), compose(f_lambda(s), M2))
