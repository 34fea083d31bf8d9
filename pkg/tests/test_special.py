import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special as sps

from quadzeta.errors import DomainError
from quadzeta.special import (EULER_GAMMA, W2, ContourSpec, const_c5, const_c6, const_c10,
                              const_c20, const_c21, gamma_C, gamma_complex, gamma_m, gamma_R,
                              gamma_R_ratio, gamma_C_ratio, loggamma_complex, phi_bump,
                              riemann_zeta, stieltjes_constant, stieltjes_gamma,
                              zeta_functional_rhs)


def test_gamma_examples():
    assert abs(gamma_complex(1.0) - 1) < 1e-14
    assert abs(gamma_complex(0.5) ** 2 - math.pi) < 1e-13
    n = np.arange(1, 10 ** 6 + 1)
    s = 1 + 1j
    prod = np.exp(-np.log(s) + np.sum(s * np.log1p(1 / n) - np.log1p(s / n)))
    assert abs(gamma_complex(s) - prod) < 1e-6
    with pytest.raises(DomainError):
        gamma_complex(-2.0)


@given(st.floats(-30, 30), st.floats(-150, 150))
def test_loggamma_matches_scipy(x, y):
    s = complex(x, y)
    if abs(s - round(x)) < 1e-3 and x <= 0.5:
        return
    ref = sps.loggamma(s)
    got = loggamma_complex(s)
    # compare exp to avoid branch ambiguity of the imaginary part
    assert abs(got.real - ref.real) <= 1e-10 * max(1.0, abs(ref.real))
    assert abs(np.exp(1j * (got.imag - ref.imag)) - 1) < 1e-9


def test_archimedean_factors():
    assert abs(gamma_R(2.0) - 1 / math.pi) < 1e-15
    assert gamma_m(0.5) == pytest.approx(1.0, abs=1e-14)
    r = abs(gamma_R(1.5) / gamma_R(-0.5))
    c = math.sqrt(abs(gamma_C(1.5) / gamma_C(-0.5)))
    assert gamma_m(-0.5) == pytest.approx(min(r, c), rel=1e-12)
    assert gamma_m(-2.0) == 0.0
    assert abs(gamma_R_ratio(-0.5) - gamma_R(1.5) / gamma_R(-0.5)) < 1e-14
    assert abs(gamma_C_ratio(-1.3) - gamma_C(2.3) / gamma_C(-1.3)) < 1e-14


def test_zeta_examples():
    assert abs(riemann_zeta(2.0) - math.pi ** 2 / 6) < 1e-14
    assert abs(riemann_zeta(3.0) - 1.2020569031595942) < 1e-13
    assert abs(riemann_zeta(-1.0) + 1 / 12) < 1e-13
    with pytest.raises(DomainError):
        riemann_zeta(1.0)


@given(st.floats(-25, 12), st.floats(-60, 60))
def test_zeta_matches_mpmath(x, y):
    s = complex(x, y)
    if abs(s - 1) < 1e-2 or abs(s) < 1e-6:     # mpmath itself misbehaves at tiny s
        return
    ref = complex(mp.zeta(mp.mpc(x, y)))
    assert abs(riemann_zeta(s) - ref) <= 1e-9 * max(1.0, abs(ref))


@given(st.floats(0.05, 0.95), st.floats(-20, 20))
def test_zeta_functional_equation(x, y):
    s = complex(x, y)
    lhs = riemann_zeta(s)
    assert abs(lhs - zeta_functional_rhs(s)) <= 1e-9 * max(1.0, abs(lhs))


def w2_oracle(xi):
    # W2(xi) = int_xi^inf 4/Gamma(1/4)^2 u^{-1/2} K0(2u) du
    c = 4 / sps.gamma(0.25) ** 2
    v, _ = integrate.quad(lambda u: c * u ** -0.5 * sps.k0(2 * u), xi, np.inf, epsabs=1e-15, limit=200)
    return v


def test_w2_examples():
    # 1 - W2(xi) ~ (4/Gamma(1/4)^2) 2 sqrt(xi) (log(1/xi) + 2 - gamma) = 1.2e-3 at 1e-8
    assert W2(1e-8) == pytest.approx(w2_oracle(1e-8), abs=1e-10)
    assert abs(W2(1e-8) - 1) < 1.3e-3
    assert abs(W2(1e-12) - 1) < 1e-4
    assert W2(40.0) <= 10 * math.exp(-40)
    a = W2(1.0, ContourSpec(c=0.5))
    b = W2(1.0, ContourSpec(c=2.0))
    assert abs(a - b) < 1e-10


@pytest.mark.parametrize("xi", [1e-4, 0.01, 0.3, 1.0, 2.5, 7.0])
def test_w2_matches_bessel_integral(xi):
    assert W2(xi) == pytest.approx(w2_oracle(xi), abs=1e-10)


def test_w2_vectorised_and_monotone():
    xs = np.linspace(0.01, 8, 400)
    v = W2(xs)
    assert v.shape == xs.shape
    assert np.all(np.diff(v) < 0)


def test_phi_bump():
    assert phi_bump(0.5) == 0.0 and phi_bump(4.0) == 0.0 and phi_bump(3.0) == 0.0
    assert phi_bump(1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_stieltjes():
    assert abs(stieltjes_gamma(0) - 0.5772156649) < 1e-4
    assert abs(stieltjes_gamma(1) + 0.0728158454) < 1e-3
    errs = [abs(stieltjes_gamma(0, t) - EULER_GAMMA) for t in (300, 600, 1200)]
    assert errs[0] > errs[1] > errs[2]
    for j in range(4):
        assert stieltjes_constant(j) == pytest.approx(float(mp.stieltjes(j)), abs=1e-12)


def test_constants():
    assert abs(const_c6(10 ** 7) - 0.068586928786) < 1e-9
    assert abs(const_c5() - 0.000072388633) < 1e-10
    assert abs(const_c21() - 0.440969247215) < 1e-9


def c20_oracle(sigma):
    mp.mp.dps = 40
    s = mp.mpf(sigma)
    a = 1 / s

    def rem(x):
        if x < mp.mpf("0.01"):
            return (x ** 6 / 45 - 17 * x ** 8 / 2520 + 31 * x ** 10 / 14175) * x ** (-a - 1)
        return (mp.log(mp.cosh(x)) - x ** 2 / 2 + x ** 4 / 12) * x ** (-a - 1)

    i0 = 1 / (2 * (2 - a)) - 1 / (12 * (4 - a)) + mp.quad(rem, [0, mp.mpf("0.01"), 0.5, 1])
    i1 = 1 / (a - 1) - mp.log(2) / a + mp.quad(lambda x: mp.log1p(mp.exp(-2 * x)) * x ** (-a - 1),
                                                 [1, 5, 20, mp.inf])
    val = s ** (2 * s / (1 - s)) * (1 - s) ** ((2 * s - 1) / (s - 1)) * (i0 + i1) ** (s / (s - 1))
    mp.mp.dps = 15
    return float(val)


@pytest.mark.parametrize("sigma", [0.55, 0.75, 0.9, 0.95])
def test_c20_two_quadratures(sigma):
    assert const_c20(sigma) == pytest.approx(c20_oracle(sigma), rel=1e-9)


def test_c10_positive_and_domain():
    assert const_c10(0.5) > 0
    with pytest.raises(DomainError):
        const_c10(1.5)
