"""The exact identity and fixture suite behind ``blender-lab verify-paper``."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .convexity import (
    convex_status,
    hessian_determinant,
    k28_expected_theta,
    k28_fixture,
    mess_identity,
    q_lambda,
    theta,
    theta_scale,
)
from .forms import Form, binary_form, compose, diff_apply, index_set, inner_product, xy
from .quartics import (
    ROTATION,
    f_lambda,
    g_lambda,
    invariants,
    map_T,
    map_U,
    phi_squared,
    psi_certificate,
    psi_value,
    self_dual_check,
)
from .verdicts import BOUNDARY, OUTSIDE
from .waring import (
    becker_certificate,
    h22_certificates,
    h24_certificate,
    dual_octic_certificates,
    omega_certificate,
    wtilde_membership,
    EvenSymmetricOctic,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    cases: int = 1

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" -- {self.detail}" if self.detail else ""
        return f"[{tag}] {self.name} ({self.cases} cases, {self.seconds:.2f}s){extra}"


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        n = sum(r.passed for r in self.results)
        lines.append(f"{n}/{len(self.results)} checks passed")
        return "\n".join(lines)

    def to_json(self):
        return {
            "ok": self.ok,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail, "cases": r.cases,
                 "seconds": round(r.seconds, 3)}
                for r in self.results
            ],
        }


def _rand_binary(rng: random.Random, d: int, lo=-6, hi=6) -> Form:
    return binary_form([Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(d + 1)])


def _rand_form(rng: random.Random, n: int, d: int) -> Form:
    return Form(n, d, {e: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for e in index_set(n, d)})


# -- individual checks ---------------------------------------------------------------------
# each returns (passed, detail, cases)

def check_h22():
    bad = [c.name for c in h22_certificates() if not c.verify()]
    return not bad, "; ".join(bad), 2


def check_h24():
    c = h24_certificate()
    return c.verify(), "" if c.verify() else str(c.residual()), 1


def check_apo(n: int = 20):
    vals = [Fraction(k - n // 2, 4) for k in range(n)]
    for lam in vals:
        for mu in vals:
            got = inner_product(f_lambda(lam), g_lambda(mu))
            if got != 4 * (1 + 3 * lam + 3 * mu - 3 * lam * mu):
                return False, f"lambda={lam}, mu={mu}: got {got}", n * n
    return True, "", n * n


def check_fglam():
    cases = 0
    for lam in (Fraction(-1, 3), Fraction(-1, 5), Fraction(0), Fraction(1, 7), Fraction(2)):
        for tau in (Fraction(0), Fraction(1, 3), Fraction(-2, 5)):
            cases += 1
            got = inner_product(f_lambda(lam), g_lambda(map_U(lam) + tau))
            if got != 12 * (1 - lam) * tau:
                return False, f"lambda={lam}, tau={tau}: got {got}", cases
    return True, "", cases


def check_diff_apply(pairs: int = 100, seed: int = 29):
    """p(D) q = q(D) p = d! [p, q]."""
    rng = random.Random(seed)
    for k in range(pairs):
        n, d = rng.choice([(2, 3), (2, 4), (3, 2), (3, 3)])
        p, q = _rand_form(rng, n, d), _rand_form(rng, n, d)
        lhs = diff_apply(p, q)
        ip = inner_product(p, q) * factorial(d)
        if lhs.coefficient((0,) * n) != ip or diff_apply(q, p).coefficient((0,) * n) != ip:
            return False, f"pair {k} (n={n}, d={d})", k + 1
    return True, "", pairs


def check_theta(count: int = 200, seed: int = 62, theta_fn: Callable = theta):
    """(2r)^2 (2r-1)^2 Theta_p equals the Hessian determinant; names the first bad b_m."""
    rng = random.Random(seed)
    x, y = xy()
    for k in range(count):
        d = rng.choice([4, 6, 8, 10, 12])
        p = _rand_binary(rng, d)
        th = theta_fn(p)
        hd = hessian_determinant(p) / theta_scale(p)
        deg = 2 * d - 4
        for m in range(deg + 1):
            e = (deg - m, m)
            if th.coefficient(e) != hd.coefficient(e):
                return False, f"form {k} (degree {d}): b_{m} differs ({th.coefficient(e)} vs {hd.coefficient(e)})", k + 1
    return True, "", count


def check_mess():
    cases = 0
    for r in (1, 2, 3):
        for a in (Fraction(1, 3), Fraction(2), Fraction(5), Fraction(17), Fraction(40)):
            cases += 1
            res = mess_identity(r, a)
            if not res.is_zero():
                return False, f"r={r}, a={a}: residual {res}", cases
    return True, "", cases


def even_rhs(lam) -> Form:
    lam = Fraction(lam)
    return binary_form([
        2 * (1 + lam) * (1 + 5 * lam + 10 * lam * lam), 0,
        30 * (1 - lam * lam) * (1 + 2 * lam), 0,
        30 * (1 - lam * lam) * (1 - 2 * lam), 0,
        2 * (1 - lam) * (1 - 5 * lam + 10 * lam * lam),
    ])


def check_even():
    lams = (Fraction(0), Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 2))
    for lam in lams:
        if compose(q_lambda(lam), ROTATION) != even_rhs(lam):
            return False, f"lambda={lam}", len(lams)
    x, y = xy()
    if compose(q_lambda(Fraction(-1, 2)), ROTATION) != x**6 + 45 * x * x * y**4 + 18 * y**6:
        return False, "q_(-1/2)(x+y, x-y)", len(lams)
    return True, "", len(lams) + 1


def check_phi_duality(count: int = 50, seed: int = 27):
    rng = random.Random(seed)
    for k in range(count):
        lam = Fraction(rng.randint(-300, 300), rng.randint(1, 97))
        if lam == 1:
            lam = Fraction(1, 2)
        if phi_squared(lam) + phi_squared(map_U(lam)) != Fraction(1, 27):
            return False, f"lambda={lam}", k + 1
    return True, "", count


def check_psi():
    cases = 0
    for r in (Fraction(-1, 3), Fraction(-1, 4), Fraction(-1, 6), Fraction(-1, 10), Fraction(0)):
        cases += 1
        c = psi_certificate(r)
        if not c.verify():
            return False, f"certificate at r={r}", cases
    r = Fraction(-1, 4)
    if psi_value(1, 1, 1, -1, r, map_U(r)) != 0:
        return False, "Psi(1,1,1,-1; -1/4, U(-1/4)) != 0", cases
    return True, "", cases + 1


def check_transfer():
    """f_lam o (x+y, x-y) = (2 + 6 lam) f_T(lam), plus the T/U fixed values."""
    for lam in (Fraction(0), Fraction(1, 3), Fraction(2), Fraction(-1, 5), Fraction(7, 4)):
        if compose(f_lambda(lam), ROTATION) != (2 + 6 * lam) * f_lambda(map_T(lam)):
            return False, f"lambda={lam}", 5
    ok = map_T(0) == 1 and map_T(Fraction(1, 3)) == Fraction(1, 3) and map_U(0) == Fraction(-1, 3)
    return ok, "" if ok else "T/U values", 6


def check_invariants():
    for lam in (Fraction(0), Fraction(1, 3), Fraction(-1, 5), Fraction(5)):
        inv = invariants(f_lambda(lam))
        if inv.I != 1 + 3 * lam * lam or inv.J != lam - lam**3:
            return False, f"lambda={lam}", 4
    return True, "", 4


def check_theta_fixtures():
    x, y = xy()
    q = q_lambda(Fraction(1, 2))
    want = Fraction(9, 8) * x * x * y * y * (x + y) ** 2 * (x * x + x * y + y * y)
    if theta(q) != want:
        return False, "Theta(q_1/2)", 1
    if convex_status(q).verdict is not BOUNDARY:
        return False, "q_1/2 should be on the boundary of K", 2
    if convex_status(q_lambda(Fraction(501, 1000))).verdict is not OUTSIDE:
        return False, "q_0.501 should be outside K", 3
    p, th = k28_fixture()
    if th != k28_expected_theta() or convex_status(p).verdict is not BOUNDARY:
        return False, "K_(2,8) example", 4
    return True, "", 4


def check_dual_octics():
    cases = 0
    for lam in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-3, 2)):
        for c in dual_octic_certificates(lam):
            cases += 1
            if not c.verify():
                return False, c.name, cases
    for a in (Fraction(0), Fraction(1), Fraction(-5, 2)):
        cases += 1
        if not omega_certificate(a).verify():
            return False, f"omega_alpha at {a}", cases
    return True, "", cases


def check_opening_identity():
    c = becker_certificate()
    return c.verify(), "" if c.verify() else str(c.residual()), 1


def check_nu0():
    ok = self_dual_check()
    return ok, "" if ok else "U(nu0) != nu0", 1


def check_e48():
    edge = wtilde_membership(EvenSymmetricOctic(1, 0, Fraction(-14, 9))).verdict
    above = wtilde_membership(EvenSymmetricOctic(1, 0, Fraction(-14, 9) + Fraction(1, 10**6))).verdict.is_member
    below = wtilde_membership(EvenSymmetricOctic(1, 0, Fraction(-14, 9) - Fraction(1, 10**6))).verdict.is_member
    ok = edge is BOUNDARY and above and not below
    return ok, "" if ok else f"edge={edge}, above={above}, below={below}", 3


CHECKS: list[tuple[str, Callable]] = [
    ("(x^2+y^2)^2 as squares and as 4th powers", check_h22),
    ("420(x^2+y^2)^4 as 8th powers", check_h24),
    ("[f_lam, g_mu] = 4(1+3lam+3mu-3lam mu) on a 20x20 grid", check_apo),
    ("[f_lam, g_(U(lam)+tau)] = 12(1-lam) tau", check_fglam),
    ("p(D) q = d! [p, q] on random pairs", check_diff_apply),
    ("Theta vs Hessian determinant on random forms", check_theta),
    ("trinomial quartic square completion, r = 1, 2, 3", check_mess),
    ("q_lam(x+y, x-y) expansion", check_even),
    ("phi^2(lam) + phi^2(U(lam)) = 1/27", check_phi_duality),
    ("Psi sum-of-squares certificates", check_psi),
    ("f_lam o rotation = (2+6lam) f_T(lam)", check_transfer),
    ("I and J of f_lam", check_invariants),
    ("Theta fixtures: q_1/2 and the K_(2,8) example", check_theta_fixtures),
    ("H_q certificates for the dual octics and omega_alpha", check_dual_octics),
    ("3(3x^4-4x^2y^2+3y^4)(x^2+y^2)^4 as 4th powers of cubics", check_opening_identity),
    ("self-dual parameter 1 - sqrt(4/3)", check_nu0),
    ("x^8 + alpha x^4y^4 + y^8 threshold at -14/9", check_e48),
]


def run_suite(checks=None, overrides: dict | None = None) -> SuiteReport:
    """Run every check; ``overrides`` maps a check function name to a replacement (for mutation tests)."""
    report = SuiteReport()
    for name, fn in checks or CHECKS:
        if overrides and fn.__name__ in overrides:
            fn = overrides[fn.__name__]
        t = time.perf_counter()
        try:
            passed, detail, cases = fn()
        except Exception as exc:  # a crash is a failure, reported not raised
            passed, detail, cases = False, f"{type(exc).__name__}: {exc}", 0
        report.results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - t, cases))
    return report
