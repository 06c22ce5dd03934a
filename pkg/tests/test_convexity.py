import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings, strategies as st

from blenders.convexity import (
    PSI_MAX_CLOSED_FORM,
    c_lambda,
    convex_status,
    convexify,
    general_trinomial_convexity,
    g_ab,
    hessian_determinant,
    hessian_sample_check,
    hrk_family,
    hrk_theta_factor,
    k28_expected_theta,
    k28_fixture,
    k_axis_status,
    match_extremal_k26,
    mess_identity,
    product_form,
    psi_curve,
    psi_curve_max,
    q_lambda,
    q_lambda_analysis,
    q_lambda_status,
    q_section_expected,
    sextic_section,
    theta,
    trinomial_bound,
    trinomial_convexity,
)
from blenders.forms import Form, binary_form, compose, evaluate, float_evaluator, power_form, xy
from blenders.quartics import f_lambda
from blenders.realroots import INDEFINITE, POSITIVE_DEFINITE, PSD_WITH_ZEROS, binary_psd_status, q_membership
from blenders.tower import tower_sign, tower_sqrt
from blenders.verdicts import BOUNDARY, INTERIOR, OUTSIDE
from oracles import hessian_det_sympy, to_sympy
from strategies import binary_forms, matrices, rationals

F = Fraction


# -- Theta ----------------------------------------------------------------------------------

@given(st.integers(2, 6).flatmap(lambda r: binary_forms(degree=2 * r)))
def test_theta_is_scaled_hessian_determinant(p):
    r2 = p.degree
    x, y = sp.symbols("x y")
    want = hessian_det_sympy(p)
    got = to_sympy(theta(p), (x, y)) * (r2 * (r2 - 1)) ** 2
    assert sp.expand(got - want) == 0


@settings(max_examples=30)
@given(binary_forms(degree=4), matrices(2))
def test_theta_covariance(p, M):
    d = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    assert theta(compose(p, M)) == compose(theta(p), M) * (d * d)


@given(rationals(), rationals(), st.integers(1, 4))
def test_theta_of_power(a, b, r):
    assume(a or b)
    assert theta(power_form((a, b), 2 * r)).is_zero()


@given(rationals(), rationals(), rationals())
def test_theta_shifted_fourth_power(a0, r, s):
    x, y = xy()
    p = a0 * (x + r * y) ** 4 + s * y**4
    # the y^2 factor (not x^2) is what the Hessian determinant gives
    assert theta(p) == a0 * s * y * y * (x + r * y) ** 2


def test_theta_q_half():
    x, y = xy()
    assert theta(q_lambda(F(1, 2))) == F(9, 8) * x * x * y * y * (x + y) ** 2 * (x * x + x * y + y * y)


def test_hessian_determinant_matches():
    p = binary_form([1, 2, 0, 3, 5])
    x, y = sp.symbols("x y")
    assert sp.expand(to_sympy(hessian_determinant(p), (x, y)) - hessian_det_sympy(p)) == 0


# -- convex_status --------------------------------------------------------------------------

def test_not_convex_quartic():
    assert convex_status(binary_form([1, 0, 12, 0, 1])).verdict is OUTSIDE


def test_power_boundary():
    assert convex_status(Form.monomial((8, 0))).verdict is BOUNDARY


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 3)])
def test_monomials_not_convex(a, b):
    assert convex_status(Form.monomial((2 * a, 2 * b))).verdict is OUTSIDE


def test_trinomial_r1_bounds():
    lo, hi = trinomial_bound(1)
    r2 = tower_sqrt(F(2))
    assert lo == 17 - 12 * r2 and hi == 17 + 12 * r2
    assert convex_status(product_form(1, lo)).verdict is BOUNDARY
    assert convex_status(product_form(1, hi)).verdict is BOUNDARY
    assert convex_status(product_form(1, F(1))).verdict is INTERIOR


@pytest.mark.parametrize("r", [1, 2, 3])
def test_trinomial_paths_agree(r):
    lo, hi = trinomial_bound(r)
    for a in [F(1, 100), F(1, 40), F(1, 30), F(1), F(5), F(33), F(34), F(40), F(60)]:
        d = trinomial_convexity(r, a)
        assert d.verdict is convex_status(product_form(r, a)).verdict
        inside = tower_sign(a - lo) >= 0 and tower_sign(hi - a) >= 0
        assert d.is_member == inside


def test_trinomial_r2_exact_root():
    lo, hi = trinomial_bound(2)
    assert trinomial_convexity(2, hi).verdict is BOUNDARY
    assert binary_psd_status(theta(product_form(2, hi))).tag is PSD_WITH_ZEROS


def test_trinomial_a_one_always():
    for r in range(1, 7):
        assert trinomial_convexity(r, F(1)).is_member


def test_trinomial_rejects_nonpositive():
    with pytest.raises(ValueError):
        trinomial_convexity(1, F(0))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_mess_identity(r):
    for a in (F(1, 3), F(2), F(17)):
        assert mess_identity(r, a).is_zero()


def test_general_trinomial_matches_product():
    # (x^2+y^2)(x^2+3y^2) = x^4 + 4x^2y^2 + 3y^4
    d = general_trinomial_convexity(2, 2, F(1), F(4), F(3))
    assert d.verdict is convex_status(product_form(1, F(3))).verdict


# -- h_{r,k} ----------------------------------------------------------------------------------

@pytest.mark.parametrize("r,k", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 2), (6, 3)])
def test_hrk_boundary(r, k):
    g, status = hrk_theta_factor(r, k)
    assert status.tag is not INDEFINITE
    assert convex_status(hrk_family(r, k)).verdict is BOUNDARY


def test_hrk_quartic_normalizes_to_flam():
    h = hrk_family(2, 1)
    c = h.coefficient((4, 0))
    assert h * (1 / c) == f_lambda(F(1))
    assert convex_status(h).verdict is BOUNDARY


def test_hrk_4k_2k():
    for k in (1, 2):
        x, y = xy()
        p = x ** (4 * k) + (8 * k - 2) * x ** (2 * k) * y ** (2 * k) + y ** (4 * k)
        assert convex_status(p).verdict is BOUNDARY


def test_hrk_sextic_family():
    x, y = xy()
    k = 1
    c = (6 * k - 1) * (6 * k - 3)
    p = x**6 + c * x**4 * y**2 + c * x**2 * y**4 + y**6
    assert convex_status(p).verdict is BOUNDARY


def test_hrk_range():
    with pytest.raises(ValueError):
        hrk_family(3, 3)


# -- q_lambda -----------------------------------------------------------------------------------

@pytest.mark.parametrize("lam,verdict", [(F(1, 2), BOUNDARY), (F(501, 1000), OUTSIDE), (F(1, 4), BOUNDARY),
                                         (F(-1, 2), BOUNDARY), (F(0), BOUNDARY), (F(-3, 4), OUTSIDE),
                                         (F(1), BOUNDARY), (F(2), OUTSIDE)])
def test_q_lambda_status(lam, verdict):
    assert q_lambda_status(lam).verdict is verdict


def test_q_minus_half_rotated():
    x, y = xy()
    assert compose(q_lambda(F(-1, 2)), [[1, 1], [1, -1]]) == x**6 + 45 * x * x * y**4 + 18 * y**6


@given(rationals(-3, 3, 20))
def test_q_lambda_discriminant(lam):
    ana = q_lambda_analysis(lam)
    assert ana["discriminant"] == ana["discriminant_formula"]
    assert ana["member"] == (abs(lam) <= F(1, 2) or abs(lam) == 1)


def test_c_lambda_factor():
    x, y = xy()
    lam = F(1, 3)
    assert theta(q_lambda(lam)) == c_lambda(lam) * x * x * y * y * (1 - lam * lam)


# -- extremal matching ------------------------------------------------------------------------

def test_match_recovers_lambda():
    p = compose(q_lambda(F(1, 3)), [[2, 1], [0, 1]])
    m = match_extremal_k26(p)
    assert m.kind == "q_lambda" and m.lam == F(1, 3)


def test_match_negative_lambda():
    m = match_extremal_k26(q_lambda(F(-1, 4)))
    assert m.kind == "q_lambda" and m.lam == F(1, 4)


def test_match_non_extremal():
    x, y = xy()
    assert match_extremal_k26(x**6 + y**6).kind == "none"
    assert match_extremal_k26((x * x + y * y) ** 3).kind == "none"
    assert match_extremal_k26((x + 2 * y) ** 6).kind == "power"


# -- convexify -------------------------------------------------------------------------------

def test_convexify_examples():
    x, y = xy()
    res = convexify(binary_form([1, 0, 12, 0, 1]))
    assert res.N >= 1 and res.history[0] is OUTSIDE
    assert res.verdict is not OUTSIDE
    assert binary_psd_status(res.theta).tag is not INDEFINITE
    assert convexify(x * x + y * y).N == 0
    assert convexify((x * x + y * y) ** 2).N == 0


def test_convexify_requires_pd():
    with pytest.raises(ValueError):
        convexify(f_lambda(F(-1, 3)))


def test_convexify_estimate_bounds_N():
    for lam in (F(-1, 4), F(2), F(5)):
        res = convexify(f_lambda(lam))
        assert res.N <= res.estimate + 1


# -- sextic section ------------------------------------------------------------------------------

def test_section_examples():
    s = sextic_section(F(1), F(1))
    assert s.K.verdict is BOUNDARY and s.Q.verdict is BOUNDARY
    assert sextic_section(F(1, 4), F(1, 2)).Q.verdict is BOUNDARY
    assert sextic_section(F(1, 2), F(1, 2)).Q.verdict is INTERIOR


def test_k_axis_intercept():
    assert k_axis_status(F(1, 12)).verdict is BOUNDARY
    assert k_axis_status(F(1, 12) + F(1, 10**6)).verdict is OUTSIDE
    assert k_axis_status(F(1, 12) - F(1, 10**6)).verdict is BOUNDARY
    # rational points near the intercept agree with the Theta criterion
    a = F(43, 100)  # 12 a^3 < 1
    assert sextic_section(a, 0).K.is_member == k_axis_status(a**3).is_member
    a = F(44, 100)  # 12 a^3 > 1
    assert sextic_section(a, 0).K.is_member == k_axis_status(a**3).is_member


def test_section_chain_on_grid():
    for i in range(-4, 13):
        for j in range(-4, 13):
            A, B = F(i, 10), F(j, 10)
            s = sextic_section(A, B)
            assert s.Q.verdict is q_section_expected(A, B)
            if s.Q.is_member:
                assert s.K.is_member
            if s.K.is_member:
                assert s.P.is_member


def test_p_boundary_curve_points():
    # 500(A^3+B^3) = 1875(AB)^2 + 150AB - 1 at a rational P-boundary point
    r = F(1)
    A, B = (1 / r**4 - 2 * r * r) / 15, (r**4 - 2 / (r * r)) / 15
    assert 500 * (A**3 + B**3) == 1875 * (A * B) ** 2 + 150 * A * B - 1
    assert sextic_section(A, B).P.verdict is BOUNDARY


def test_psi_curve_max():
    lam, val = psi_curve_max()
    assert abs(val - PSI_MAX_CLOSED_FORM) <= 1e-9
    assert abs(val - 1.000905) <= 1e-5
    assert abs(lam - 0.0883) < 1e-3


def test_psi_curve_on_k_boundary():
    # psi(0) = 1 is the point (1, 1)
    assert psi_curve(0.0) == pytest.approx(1.0)
    assert psi_curve(-0.5) == pytest.approx(0.0, abs=1e-12)


# -- Hessian sampling -----------------------------------------------------------------------------

def test_hessian_sample_dmitriev():
    x, y, z = (Form.var(3, i) for i in range(3))
    p = x**4 + y**4 + z**4 + 6 * x * x * y * y + 6 * x * x * z * z + 2 * y * y * z * z
    assert not hessian_sample_check(p, trials=100_000, seed=1).violation


def test_hessian_sample_witness():
    x, y = xy()
    p = x * x * y * y
    res = hessian_sample_check(p, trials=1000, seed=0)
    assert res.violation
    from blenders.forms import hessian_biform

    val = float_evaluator(hessian_biform(p))(np.array([list(res.u) + list(res.v)]))[0]
    assert val < 0


def test_hessian_sample_convex():
    x, y, z = (Form.var(3, i) for i in range(3))
    assert not hessian_sample_check((x * x + y * y + z * z) ** 2, trials=20_000, seed=3).violation


# -- K_{2,8} example -----------------------------------------------------------------------------

def test_k28():
    p, th = k28_fixture()
    assert th == k28_expected_theta()
    assert convex_status(p).verdict is BOUNDARY
    assert evaluate(p, (1, 1)) == 16


# -- properties ---------------------------------------------------------------------------------

def test_k24_equals_q24():
    rng = random.Random(24)
    for _ in range(200):
        p = binary_form([F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(5)])
        if p.is_zero():
            continue
        assert (convex_status(p).verdict is not OUTSIDE) == (q_membership(p).verdict is not OUTSIDE)


@settings(max_examples=40)
@given(st.lists(st.tuples(rationals(), rationals(), st.integers(0, 5)), min_size=1, max_size=4), st.integers(1, 3))
def test_q_subset_k(terms, r):
    p = Form.zero(2, 2 * r)
    for a, b, w in terms:
        p = p + power_form((a, b), 2 * r) * w
    assume(not p.is_zero())
    assert convex_status(p).verdict is not OUTSIDE


def test_section_second_derivative():
    rng = np.random.default_rng(44)
    checked = 0
    while checked < 30:
        r = int(rng.integers(1, 4))
        p = binary_form([int(c) for c in rng.integers(-3, 4, size=2 * r + 1)]) + \
            binary_form([1] + [0] * (2 * r - 1) + [1]) * 4
        p = p + (Form.var(2, 0) ** 2 + Form.var(2, 1) ** 2) ** r * 6
        if binary_psd_status(p).tag is not POSITIVE_DEFINITE:
            continue
        from blenders.forms import binary_a

        a = [float(v) for v in binary_a(p)]
        q = lambda t: float(evaluate(p, (1, F(t)))) if isinstance(t, F) else None  # noqa: E731
        f = float_evaluator(p)
        g = lambda t: f(np.array([[1.0, t]]))[0] ** (1 / (2 * r))  # noqa: E731
        h = 1e-3
        fd = (-g(2 * h) + 16 * g(h) - 30 * g(0) + 16 * g(-h) - g(-2 * h)) / (12 * h * h)
        want = (2 * r - 1) * a[0] ** (-2 + 1 / (2 * r)) * (a[0] * a[2] - a[1] ** 2)
        assert abs(fd - want) <= 1e-6 * max(1.0, abs(want))
        checked += 1
