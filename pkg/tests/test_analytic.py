import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadzeta.analytic import (A_func, EulerProductSpec, Gp_ratio, LaurentSeries, c2_const,
                               c3_const, decompose_l, eta_closed_form_1, eta_p, eta_p_deriv,
                               eta_product, multiplicative_identity_check, predicted_product,
                               rankin_tail, residue_contour, residue_lemma, zeta_laurent)
from quadzeta.arith import (CompletelyMultiplicativeF, FGH_values, H_func, h_func, sieve_primes,
                            sigma_divisors, tau)
from quadzeta.errors import DomainError
from quadzeta.special import EULER_GAMMA, const_c6, riemann_zeta, stieltjes_constant

ODD_PRIMES = [int(p) for p in sieve_primes(100).primes if p > 2]
PRIMES_100 = [int(p) for p in sieve_primes(100).primes]


def test_decompose_examples():
    assert (decompose_l(1).l1, decompose_l(1).l2) == (1, 1)
    assert (decompose_l(12).l1, decompose_l(12).l2) == (3, 2)
    assert (decompose_l(8).l1, decompose_l(8).l2) == (2, 2)


@given(st.integers(1, 10 ** 6))
def test_decompose_reconstructs(l):
    e = decompose_l(l)
    assert e.l1 * e.l2 ** 2 == l
    assert all(e.l1 % (q * q) for q in range(2, int(e.l1 ** 0.5) + 1))


def test_eta_p_examples():
    for l in (1, 3, 12):
        assert eta_p(1.0, l, 2) == pytest.approx(0.125, abs=1e-15)
    # p = 3, l = 1, alpha = 2: the p^{-2 alpha} coefficient vanishes since p - 3 = 0
    assert eta_p(2.0, 1, 3) == pytest.approx(1 - 3 / (4 * 9) - 1 / (4 * 3 ** 6), rel=1e-15)
    for p in (3, 5, 7, 97):
        assert eta_p(1.0, p, p) == pytest.approx(p / (p + 1) * (1 - 1 / p), rel=1e-15)


@given(st.sampled_from(ODD_PRIMES), st.sampled_from([1, 3, 5, 9, 15, 45]),
       st.floats(0.6, 3.0), st.integers(1, 3))
def test_eta_p_derivative_fd(p, l, alpha, i):
    h = 1e-4
    f = lambda a: eta_p_deriv(i - 1, a, l, p)
    fd = (f(alpha - 2 * h) - 8 * f(alpha - h) + 8 * f(alpha + h) - f(alpha + 2 * h)) / (12 * h)
    assert eta_p_deriv(i, alpha, l, p) == pytest.approx(fd, abs=1e-9)


def test_eta_product_examples():
    v, tb = eta_product(1.0, 1, EulerProductSpec(P=10 ** 6))
    assert abs(v - const_c6()) < 1e-10 + tb
    # only the case pattern at each prime matters
    assert eta_product(1.3, 3, 10 ** 5).value == pytest.approx(eta_product(1.3, 27, 10 ** 5).value, rel=1e-15)
    assert eta_product(1.3, 9, 10 ** 5).value == pytest.approx(eta_product(1.3, 81, 10 ** 5).value, rel=1e-15)
    a = eta_product(2.0, 1, 10 ** 5).value
    b = eta_product(2.0, 1, 10 ** 6).value
    assert abs(a - b) < 1e-10


def test_eta_product_complex_alpha():
    a = 1.2 + 0.3j
    v = eta_product(a, 15, 10 ** 5).value
    ps = sieve_primes(10 ** 5).primes
    direct = np.prod([eta_p(a, 15, int(p)) for p in ps[:2000]])
    assert abs(v / direct - 1) < 1e-3      # rest of the product is 1 + O(p^{-2})


def test_closed_form_examples():
    assert eta_closed_form_1(1, 1, 1) == pytest.approx(const_c6(), rel=1e-15)
    h15 = float(h_func(3) * h_func(5))
    assert eta_closed_form_1(1, 3, 5) == pytest.approx(const_c6() * 15 / (24 * h15), rel=1e-14)
    with pytest.raises(DomainError):
        eta_closed_form_1(2, 3, 5)
    with pytest.raises(DomainError):
        eta_closed_form_1(3, 3, 5)


@pytest.mark.slow
def test_closed_form_vs_product_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        ps = [int(x) for x in rng.choice(ODD_PRIMES, size=3, replace=False)]
        a, r, s = ps[0] ** int(rng.integers(1, 3)), ps[1], ps[2]
        prod = eta_product(1.0, a * a * r * s, 10 ** 6).value
        assert abs(prod / eta_closed_form_1(a, r, s) - 1) < 1e-8


def test_gp_ratio_trivial():
    for i in (1, 2, 3):
        for p in (3, 7, 101):
            assert Gp_ratio(i, p, 1) == 0.0


def nearest_prime(n):
    while not all(n % q for q in range(2, int(n ** 0.5) + 1)):
        n += 1
    return n


@pytest.mark.parametrize("i", [1, 2, 3])
def test_gp_ratio_stabilises(i):
    vals = []
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        p = nearest_prime(n)
        vals.append(Gp_ratio(i, p, p) * p / math.log(p) ** i)
    assert abs(vals[2] - c2_const(i)) < abs(vals[0] - c2_const(i)) + 1e-12
    assert abs(vals[2] - c2_const(i)) < 5e-2
    p = nearest_prime(10 ** 5)
    assert Gp_ratio(i, p, p * p) * p * p / math.log(p) ** i == pytest.approx(c3_const(i), rel=1e-3)


@settings(max_examples=20)
@given(st.sampled_from(ODD_PRIMES), st.sampled_from([3, 5, 9, 15, 25, 45, 75]))
def test_gp_ratio_first_matches_fd(p, l):
    h = 1e-5
    logG = lambda a: math.log(eta_p(a, l, p)) - math.log(eta_p(a, 1, p))
    fd = (logG(1 + h) - logG(1 - h)) / (2 * h)
    assert Gp_ratio(1, p, l) == pytest.approx(fd, abs=1e-6)


@settings(max_examples=20)
@given(st.integers(1, 3), st.sampled_from(ODD_PRIMES), st.sampled_from([3, 5, 9, 15, 25, 45]))
def test_gp_ratio_matches_fd_of_G(i, p, l):
    # G^{(i)}/G by a 5-point stencil applied to G itself
    G = lambda a: eta_p(a, l, p) / eta_p(a, 1, p)
    h = 1e-3
    xs = [1 + k * h for k in (-2, -1, 0, 1, 2)]
    g = [G(x) for x in xs]
    d = {1: (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * h),
         2: (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h * h),
         3: (-g[0] + 2 * g[1] - 2 * g[3] + g[4]) / (2 * h ** 3)}[i]
    assert Gp_ratio(i, p, l) == pytest.approx(d / g[2], rel=1e-4, abs=1e-6)


def test_a_func_examples():
    a = A_func(1.5, 1.5, 1, truncation=2001).value
    b = A_func(1.5, 1.5, 1, truncation=20001).value
    assert abs(a - b) < 1e-8
    assert A_func(20, 20, 1).value < 1 + 1e-6


def test_a_func_bound():
    rng = np.random.default_rng(3)
    c = 0.8
    rhs_zeta = riemann_zeta(2 * c) ** 3 / riemann_zeta(4 * c)
    for _ in range(10):
        a, r, s = (int(x) for x in rng.choice(ODD_PRIMES[:10], size=3, replace=False))
        lhs = A_func(c - 0.5, c - 0.5, a * a * r * s, truncation=4001).value / math.sqrt(r * s)
        assert lhs <= tau(r * s) / (r * s) ** c * rhs_zeta


def test_zeta_laurent_coefficients():
    z = zeta_laurent(3)
    assert z.coeff(-1) == 0.5
    assert z.coeff(0) == pytest.approx(EULER_GAMMA, abs=1e-14)
    assert z.coeff(1) == pytest.approx(-2 * stieltjes_constant(1), abs=1e-14)
    w = 0.01
    approx = sum(z.coeff(k) * w ** k for k in range(-1, 4))
    assert approx == pytest.approx(riemann_zeta(1 + 2 * w), abs=1e-9)


def test_laurent_mul():
    a = LaurentSeries(1, [1.0, 2.0, 3.0])     # w^-1 + 2 + 3w
    b = LaurentSeries(0, [1.0, -1.0, 0.5])    # 1 - w + w^2/2
    c = a * b
    assert c.coeff(-1) == 1.0 and c.coeff(0) == 1.0 and c.coeff(1) == pytest.approx(1.5)


@pytest.mark.slow
@pytest.mark.parametrize("X,a,r,s", [(1e4, 1, 1, 1), (1e5, 1, 3, 5), (1e6, 3, 5, 7),
                                     (1e3, 1, 1, 3), (1e5, 5, 1, 7)])
def test_residue_series_vs_contour(X, a, r, s):
    ser = residue_lemma(X, a, r, s)
    con = residue_contour(X, a, r, s)
    assert abs(ser - con) <= 1e-6 * abs(con)


def test_residue_degree_structure():
    ratios = []
    for X in (1e3, 1e4, 1e5, 1e6):
        d = residue_lemma(X, 1, 3, 5) - residue_lemma(X, 1, 3, 5, mode="leading")
        ratios.append(d / math.log(X / 15) ** 2)
    assert max(abs(x) for x in ratios) < 0.05
    assert max(ratios) - min(ratios) < 0.01


def test_residue_leading_and_linearity():
    X = 15 * math.e
    lead = residue_lemma(X, 1, 3, 5, mode="leading")
    assert lead == pytest.approx(const_c6() / 48 * 15 / (sigma_divisors(15) * float(h_func(15))), rel=1e-14)
    base = residue_lemma(1e5, 1, 3, 5)
    assert residue_lemma(1e5, 1, 3, 5, gamma_scale=2.0) == pytest.approx(2 * base, rel=1e-14)


def test_identity_examples():
    f = CompletelyMultiplicativeF("right", 1.5, 0.75)
    assert multiplicative_identity_check([], 2, f) == (0.0, 0.0)
    lhs, rhs = multiplicative_identity_check([11, 13], 1, f)
    assert abs(lhs - rhs) < 1e-12
    lhs, rhs = multiplicative_identity_check([11, 13, 17], 3, f)
    assert abs(lhs - rhs) < 1e-10


@given(st.lists(st.sampled_from(PRIMES_100), min_size=1, max_size=3, unique=True),
       st.integers(1, 3), st.floats(0.5, 3.0), st.floats(0.55, 0.95))
def test_identity_property(S, t, L, sigma):
    f = CompletelyMultiplicativeF("right", L, sigma)
    lhs, rhs = multiplicative_identity_check(S, t, f)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@given(st.lists(st.sampled_from(PRIMES_100[2:]), min_size=1, max_size=4, unique=True),
       st.integers(1, 3))
def test_h_sum_bound(S, t):
    f = CompletelyMultiplicativeF("right", 2.0, 0.75, support=tuple(S))
    lhs = sum(abs(H_func(math.prod(c), f)) for c in itertools.combinations(S, t))
    rhs = sum(abs(FGH_values(p, 1, f).H) for p in S) ** t
    assert lhs <= rhs * (1 + 1e-12)


def test_predicted_product_examples():
    empty = CompletelyMultiplicativeF("center", 1.0)
    assert predicted_product("m1_center", empty, cutoff=100) == 1.0
    f = CompletelyMultiplicativeF("right", 2.0, 0.75)
    assert predicted_product("D_general", f, D=1.0, cutoff=1000) == pytest.approx(
        predicted_product("m1_right", f, cutoff=1000), rel=1e-15)


def synthetic_ratio(N):
    L = math.sqrt(math.log(N) * math.log(math.log(N)))
    f = CompletelyMultiplicativeF("center", L, upper=1e7)
    r = predicted_product("m2_center", f, cutoff=1e7) / predicted_product("m1_center", f, cutoff=1e7)
    return 2 * math.log(r)


def test_center_ratio_trend():
    for N in (1e10, 1e12):
        v = synthetic_ratio(N) / math.sqrt(math.log(N) / math.log(math.log(N)))
        assert -8 <= v <= -1
    vals = [synthetic_ratio(N) for N in (1e10, 1e12, 1e14)]
    assert vals[0] > vals[1] > vals[2]


def test_rankin_examples():
    f = CompletelyMultiplicativeF("center", 2.0, upper=1e3, support=(11, 13))
    emp, bound = rankin_tail(f, 1e9, 0.1)
    assert emp == 0.0
    emp, bound = rankin_tail(f, 12, 0.1)
    assert 0 < emp <= bound
    g = CompletelyMultiplicativeF("right", 2.0, 0.75)
    emp, bound = rankin_tail(g, 50, 0.3, D=2.0, cutoff=100)
    assert 0 < emp <= bound


@settings(max_examples=25)
@given(st.lists(st.sampled_from(PRIMES_100[3:]), min_size=1, max_size=5, unique=True),
       st.floats(2, 5000), st.floats(0.01, 0.45))
def test_rankin_center_property(S, N, alpha):
    f = CompletelyMultiplicativeF("center", 2.0, upper=1e3, support=tuple(sorted(S)))
    emp, bound = rankin_tail(f, N, alpha)
    assert bound > 0
    assert emp <= bound * (1 + 1e-12)
