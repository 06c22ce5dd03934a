import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from blenders.forms import Form, FormError, binary_form, compose, evaluate, xy
from blenders.convexity import g_ab
from blenders.quartics import f_lambda
from blenders.realroots import (
    INDEFINITE,
    POSITIVE_DEFINITE,
    PSD_WITH_ZEROS,
    binary_psd_status,
    catalecticant,
    charpoly,
    kernel,
    q_membership,
    sym_psd_status,
)
from blenders.tower import TowerError, TowerScalar, tower_sign, tower_sqrt
from blenders.univariate import (
    count_real_roots,
    isolate_real_roots,
    refine_interval,
    squarefree_decomposition,
    sturm_chain,
)
from blenders.verdicts import BOUNDARY, INTERIOR, OUTSIDE
from oracles import binary_psd_oracle, circle_samples, sym_psd_oracle
from strategies import binary_forms, matrices, rationals

F = Fraction
TAGS = {POSITIVE_DEFINITE: "pd", PSD_WITH_ZEROS: "psd", INDEFINITE: "indefinite"}


# -- tower scalars ------------------------------------------------------------------------

def test_tower_sign_examples():
    r2 = tower_sqrt(F(2))
    assert tower_sign(17 - 12 * r2) == 1
    assert tower_sign(1 - tower_sqrt(F(4, 3))) == -1
    assert tower_sign(r2 - r2) == 0


def test_tower_collapses_rational_results():
    r2 = tower_sqrt(F(2))
    assert r2 * r2 == 2
    assert isinstance(r2 * r2, (int, Fraction))
    assert tower_sqrt(F(9, 4)) == F(3, 2)


def test_tower_nested():
    r2 = tower_sqrt(F(2))
    inner = 3 + r2
    s = tower_sqrt(inner, over=r2.chain)
    assert s * s == inner
    assert s.level == 2
    assert tower_sign(s - 2) == 1  # sqrt(4.414) > 2
    assert tower_sign(s - F(211, 100)) == -1


def test_tower_depth_limit():
    r2 = tower_sqrt(F(2))
    s = tower_sqrt(3 + r2, over=r2.chain)
    with pytest.raises(TowerError):
        tower_sqrt(5 + s, over=s.chain)


def test_tower_negative_sqrt():
    with pytest.raises(TowerError):
        tower_sqrt(F(-1))
    with pytest.raises(TowerError):
        tower_sqrt(1 - tower_sqrt(F(3)))


def test_tower_division():
    r3 = tower_sqrt(F(3))
    x = (2 + r3) / (1 - r3)
    assert x * (1 - r3) == 2 + r3


@given(rationals(), rationals(), st.sampled_from([2, 3, 5, 7, 10]))
def test_tower_conjugate_product(a, b, s):
    r = tower_sqrt(F(s))
    assert (a + b * r) * (a - b * r) == a * a - b * b * s


@given(rationals(), rationals(), rationals(), rationals())
def test_tower_square_nonnegative(a, b, c, d):
    r2 = tower_sqrt(F(2))
    x = a + b * r2
    t = tower_sqrt(3 + r2, over=r2.chain)
    y = x + (c + d * r2) * t
    for v in (x, y):
        assert tower_sign(v * v) >= 0
        assert tower_sign(v) == np.sign(float(v)) or abs(float(v)) < 1e-9


@given(rationals(), rationals())
def test_tower_sign_matches_float(a, b):
    x = a + b * tower_sqrt(F(7))
    f = float(a) + float(b) * 7**0.5
    if abs(f) > 1e-9:
        assert tower_sign(x) == (1 if f > 0 else -1)


# -- univariate kernels ------------------------------------------------------------------------

def test_squarefree_decomposition():
    t = sp.symbols("t")
    q = sp.Poly(sp.expand((t - 1) ** 2 * (t**2 + 1) * (t + 3) ** 3), t)
    coeffs = [F(int(c)) for c in reversed(q.all_coeffs())]
    parts = squarefree_decomposition(coeffs)
    mults = sorted(m for _, m in parts if len(_) > 1)
    assert mults == [1, 2, 3]


def test_isolation_exact_and_interval():
    # (t - 1/2)(t^2 - 2)
    p = [F(1), F(-2), F(-1, 2), F(1)]
    roots = isolate_real_roots(p)
    assert len(roots) == 3
    exact = [r for r in roots if r[0] == "exact"]
    assert exact and exact[0][1] == F(1, 2)
    for r in roots:
        if r[0] == "interval":
            lo, hi = refine_interval(p, r[1], r[2], F(1, 10**8))
            assert abs(abs(float(lo)) - 2**0.5) < 1e-7


def _random_squarefree(rng, deg):
    t = sp.symbols("t")
    while True:
        c = [rng.randint(-9, 9) for _ in range(deg + 1)]
        if c[-1] == 0:
            continue
        P = sp.Poly(list(reversed(c)), t)
        if sp.degree(sp.gcd(P, P.diff(t))) == 0:
            return c, P


def test_sturm_counts_vs_numpy():
    rng = random.Random(12)
    for _ in range(500):
        deg = rng.randint(1, 12)
        c, P = _random_squarefree(rng, deg)
        got = count_real_roots([F(v) for v in c])
        want = len(sp.real_roots(P))
        assert got == want
        # numpy agrees whenever the roots are well separated from the imaginary axis
        nr = np.roots(list(reversed(c)))
        nreal = int(np.sum(np.abs(nr.imag) < 1e-7 * np.maximum(1, np.abs(nr))))
        if all(abs(z.imag) > 1e-4 or abs(z.imag) < 1e-12 for z in nr):
            assert nreal == want


def test_count_in_interval():
    p = [F(-2), F(0), F(1)]  # t^2 - 2
    assert count_real_roots(p, F(0), F(2)) == 1
    assert count_real_roots(p, F(-2), F(2)) == 2
    assert count_real_roots(p, F(2), F(3)) == 0
    assert len(sturm_chain(p)) >= 2


# -- binary psd status --------------------------------------------------------------------------

@pytest.mark.parametrize("lam,tag", [(F(-1, 2), INDEFINITE), (F(-1, 3), PSD_WITH_ZEROS), (F(0), POSITIVE_DEFINITE),
                                     (F(-1, 3) + F(1, 10**9), POSITIVE_DEFINITE), (F(-1, 3) - F(1, 10**9), INDEFINITE)])
def test_flam_psd(lam, tag):
    assert binary_psd_status(f_lambda(lam)).tag is tag


def test_x2y2_zeros():
    x, y = xy()
    st_ = binary_psd_status(x * x * y * y)
    assert st_.tag is PSD_WITH_ZEROS
    pts = sorted(z.point for z in st_.zeros)
    assert pts == [(0, 1), (1, 0)]


def test_sextic_pd():
    p = Form(2, 6, {(6, 0): 1, (2, 4): 45, (0, 6): 18})
    assert binary_psd_status(p).tag is POSITIVE_DEFINITE
    assert circle_samples(p).min() > 0


def test_zero_form_rejected():
    with pytest.raises(FormError):
        binary_psd_status(Form.zero(2, 4))


def test_odd_degree_indefinite_with_witness():
    x, y = xy()
    p = x**3 + y**3
    s = binary_psd_status(p)
    assert s.tag is INDEFINITE
    assert evaluate(p, s.witness) < 0


def test_algebraic_zero():
    x, y = xy()
    p = (x * x - 2 * y * y) ** 2
    s = binary_psd_status(p)
    assert s.tag is PSD_WITH_ZEROS
    assert len(s.zeros) == 2
    assert all(z.multiplicity == 2 for z in s.zeros)
    assert not s.zeros[0].is_exact


def test_tower_coefficients_psd():
    x, y = xy()
    r2 = tower_sqrt(F(2))
    assert binary_psd_status((x * x - r2 * x * y + y * y) ** 2).tag is POSITIVE_DEFINITE
    assert binary_psd_status((x - r2 * y) ** 2 * (x * x + y * y)).tag is PSD_WITH_ZEROS
    assert binary_psd_status(x * x - 2 * r2 * x * y + y * y).tag is INDEFINITE
    assert binary_psd_status(x * x - r2 * x * y + y * y).tag is POSITIVE_DEFINITE


def test_status_json():
    s = binary_psd_status(f_lambda(F(-1, 3)))
    obj = s.to_json()
    assert obj["tag"] == "PsdWithZeros" or obj["tag"] == PSD_WITH_ZEROS.value
    assert len(obj["zeros"]) == 2


@st.composite
def psd_with_zeros(draw):
    """Products of squares of rational linear forms times a pd quadratic."""
    x, y = xy()
    p = Form.constant(2, 1)
    for _ in range(draw(st.integers(1, 3))):
        a, b = draw(rationals()), draw(rationals())
        if a == 0 and b == 0:
            a = F(1)
        p = p * (a * x + b * y) ** 2
    c = draw(st.integers(1, 5))
    return p * (x * x + c * y * y)


@given(binary_forms(max_degree=8))
def test_psd_status_matches_sympy(p):
    assert TAGS[binary_psd_status(p).tag] == binary_psd_oracle(p)


@given(psd_with_zeros())
def test_psd_with_zeros_detected(p):
    s = binary_psd_status(p)
    assert s.tag is PSD_WITH_ZEROS
    for z in s.zeros:
        if z.is_exact:
            assert evaluate(p, z.point) == 0


@given(binary_forms(degree=4))
def test_indefinite_witness_is_negative(p):
    s = binary_psd_status(p)
    if s.tag is INDEFINITE:
        assert evaluate(p, s.witness) < 0


@settings(max_examples=40)
@given(psd_with_zeros(), matrices(2))
def test_psd_stable_under_substitution(p, M):
    q = compose(p, M)
    if not q.is_zero():
        assert binary_psd_status(q).tag is not INDEFINITE


def test_circle_sampling_agreement():
    rng = np.random.default_rng(8)
    for _ in range(40):
        p = binary_form([int(c) for c in rng.integers(-6, 7, size=7)])
        if p.is_zero():
            continue
        s = binary_psd_status(p)
        vals = circle_samples(p)
        if s.tag is POSITIVE_DEFINITE:
            assert vals.min() > 0
        elif s.tag is PSD_WITH_ZEROS:
            assert vals.min() > -1e-9
        else:
            assert vals.min() < 1e-9


# -- matrices -----------------------------------------------------------------------------------

@pytest.mark.parametrize("lam,psd", [(F(0), True), (F(1), True), (F(1, 2), True), (F(-1, 100), False), (F(101, 100), False)])
def test_flam_catalecticant_psd(lam, psd):
    M = [[1, 0, lam], [0, lam, 0], [lam, 0, 1]]
    assert sym_psd_status(M).is_psd == psd


def test_identity_pd():
    assert sym_psd_status([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).tag is POSITIVE_DEFINITE


@pytest.mark.parametrize("A,B", [(F(1, 2), F(1, 2)), (F(1, 4), F(1, 2)), (F(1, 2), F(1, 4)),
                                 (F(1), F(1)), (F(0), F(0)), (F(2), F(1))])
def test_gab_hankel(A, B):
    H = catalecticant(g_ab(A, B))
    assert len(H) == 4
    assert sym_psd_status(H).is_psd == (A >= B * B and B >= A * A)


def test_catalecticant_examples():
    lam = F(2, 7)
    assert catalecticant(f_lambda(lam)) == [[1, 0, lam], [0, lam, 0], [lam, 0, 1]]
    H = catalecticant(Form.monomial((6, 0)))
    assert H[0][0] == 1 and sum(abs(v) for row in H for v in row) == 1
    with pytest.raises(FormError):
        catalecticant(Form.monomial((3, 0)))


def test_kernel_vectors():
    M = [[1, 1], [1, 1]]
    (v,) = kernel(M)
    assert v[0] + v[1] == 0
    s = sym_psd_status(M)
    assert s.tag is PSD_WITH_ZEROS


def test_charpoly_matches_sympy():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 6)
        M = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = F(rng.randint(-9, 9), rng.randint(1, 4))
        t = sp.symbols("t")
        want = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in r] for r in M]).charpoly(t).all_coeffs()
        got = charpoly(M)
        assert [F(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in reversed(want)] == list(got) or \
            [F(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in want] == list(got)


def test_sym_psd_vs_eigenvalues():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        if rng.random() < 0.5:
            A = rng.integers(-3, 4, size=(n, n))
            M = A @ A.T if rng.random() < 0.7 else A + A.T
        else:
            k = int(rng.integers(1, n + 1))
            A = rng.integers(-3, 4, size=(n, k))
            M = A @ A.T
        exact = [[F(int(v)) for v in row] for row in M]
        status = sym_psd_status(exact)
        ev = np.linalg.eigvalsh(M.astype(float))
        tol = 1e-8 * max(1.0, np.abs(ev).max())
        if status.tag is POSITIVE_DEFINITE:
            assert ev.min() > -tol
        elif status.tag is PSD_WITH_ZEROS:
            assert ev.min() > -tol and abs(ev).min() < tol
        else:
            assert ev.min() < tol


def test_sym_psd_vs_sympy_small():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 4)
        A = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        M = [[A[i][j] + A[j][i] + (2 if i == j and rng.random() < 0.5 else 0) for j in range(n)] for i in range(n)]
        assert TAGS[sym_psd_status(M).tag] == sym_psd_oracle(M)


# -- Q membership ---------------------------------------------------------------------------------

@pytest.mark.parametrize("lam,verdict", [(F(0), BOUNDARY), (F(1), BOUNDARY), (F(1, 2), INTERIOR),
                                         (F(-1, 10**6), OUTSIDE), (F(1) + F(1, 10**6), OUTSIDE)])
def test_q_membership_flam(lam, verdict):
    assert q_membership(f_lambda(lam)).verdict is verdict


def test_q_membership_power():
    x, y = xy()
    assert q_membership((2 * x - 3 * y) ** 6).verdict is BOUNDARY


def test_q_membership_g11_boundary():
    assert q_membership(g_ab(F(1), F(1))).verdict is BOUNDARY


def test_q_membership_odd_degree():
    with pytest.raises(FormError):
        q_membership(Form.monomial((3, 0)))


@given(binary_forms(degree=4))
def test_q_implies_p(p):
    d = q_membership(p)
    if d.verdict in (INTERIOR, BOUNDARY):
        assert binary_psd_status(p).tag is not INDEFINITE
