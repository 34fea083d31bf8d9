"""Special functions and numerical constants.

Complex Gamma (Lanczos), archimedean factors, Riemann zeta via
Euler-Maclaurin, the smoothing weight W2 by contour quadrature, the
bump function Phi, Stieltjes constants and the constants c5, c6, c10,
c20, c21 used by the moment and distribution predictions.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import bernoulli, exp1

from . import _kernels
from .arith import sieve_primes
from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
])
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def _is_pole(s) -> np.ndarray:
    s = np.asarray(s)
    return (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))


def _loggamma_right(z):
    z = z - 1.0
    x = np.full(z.shape, _LANCZOS[0], dtype=np.complex128)
    for i in range(1, 9):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _log_sin_pi(z):
    """A branch of log(sin(pi z)), stable for large |Im z|."""
    out = np.empty(z.shape, dtype=np.complex128)
    big = np.abs(z.imag) > 15
    zs = z[~big]
    out[~big] = np.log(np.sin(np.pi * zs))
    zb = z[big]
    pos = zb.imag > 0
    # sin(pi z) = (e^{i pi z} - e^{-i pi z})/(2i)
    zp, zn = zb[pos], zb[~pos]
    res = np.empty(zb.shape, dtype=np.complex128)
    res[pos] = -1j * np.pi * zp - np.log(-2j) + np.log1p(-np.exp(2j * np.pi * zp))
    res[~pos] = 1j * np.pi * zn - np.log(2j) + np.log1p(-np.exp(-2j * np.pi * zn))
    out[big] = res
    return out


def loggamma_complex(s):
    """A branch of log Gamma(s) (exp of it is exact; branch is not principal)."""
    z = np.asarray(s, dtype=np.complex128)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if _is_pole(z).any():
        raise DomainError("Gamma has a pole at a nonpositive integer")
    out = np.empty(z.shape, dtype=np.complex128)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    zl = z[~right]
    out[~right] = math.log(math.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return out[0] if scalar else out


def gamma_complex(s):
    """Gamma(s) for complex s (Lanczos g=7, n=9, with reflection)."""
    v = np.exp(loggamma_complex(s))
    if np.isscalar(s) and not isinstance(s, complex) and np.isrealobj(s):
        return float(v.real)
    return v


def _nonpos_int(s) -> bool:
    return complex(s).imag == 0 and complex(s).real <= 0 and float(complex(s).real).is_integer()


def gamma_R(s):
    """pi^{-s/2} Gamma(s/2); 1/Gamma_R is returned as 0-reciprocal at poles."""
    s = complex(s)
    return complex(np.exp(-0.5 * s * math.log(math.pi) + loggamma_complex(s / 2)))


def gamma_C(s):
    """(2 pi)^{-s} Gamma(s)."""
    s = complex(s)
    return complex(np.exp(-s * math.log(2 * math.pi) + loggamma_complex(s)))


def _log_abs_ratio_R(s: complex) -> float:
    return float((-0.5 * (1 - s) * math.log(math.pi) + loggamma_complex((1 - s) / 2)
                  + 0.5 * s * math.log(math.pi) - loggamma_complex(s / 2)).real)


def _log_abs_ratio_C(s: complex) -> float:
    return float((-(1 - s) * math.log(2 * math.pi) + loggamma_complex(1 - s)
                  + s * math.log(2 * math.pi) - loggamma_complex(s)).real)


def gamma_R_ratio(s) -> complex:
    """Gamma_R(1-s)/Gamma_R(s)."""
    s = complex(s)
    return complex(np.exp(-0.5 * (1 - s) * math.log(math.pi) + loggamma_complex((1 - s) / 2)
                          + 0.5 * s * math.log(math.pi) - loggamma_complex(s / 2)))


def gamma_C_ratio(s) -> complex:
    """Gamma_C(1-s)/Gamma_C(s)."""
    s = complex(s)
    return complex(np.exp(-(1 - s) * math.log(2 * math.pi) + loggamma_complex(1 - s)
                          + s * math.log(2 * math.pi) - loggamma_complex(s)))


def gamma_m(s) -> float:
    """min(|Gamma_R(1-s)/Gamma_R(s)|, |Gamma_C(1-s)/Gamma_C(s)|^{1/2}).

    Zero at negative integers, where one of the denominators has a pole.
    """
    s = complex(s)
    if _nonpos_int(s) and s.real < 0:
        return 0.0
    if _nonpos_int(s) or _nonpos_int(1 - s):
        raise DomainError("Gamma_m undefined at s = 0 or positive integers")
    r = _log_abs_ratio_R(s)
    c = 0.5 * _log_abs_ratio_C(s)
    return math.exp(min(r, c))


# ---------------------------------------------------------------------------
# Riemann zeta
# ---------------------------------------------------------------------------

_ZETA_J = 10
_ZETA_B = None


def _zeta_bern():
    global _ZETA_B
    if _ZETA_B is None:
        _ZETA_B = _kernels._bernoulli_ratios(_ZETA_J)
    return _ZETA_B


def _zeta_em(s: complex, N: int) -> complex:
    b = _zeta_bern()
    n = np.arange(1, N, dtype=np.float64)
    head = np.exp(-s * np.log(n))
    total = complex(math.fsum(head.real), math.fsum(head.imag))
    lN = math.log(N)
    total += np.exp((1 - s) * lN) / (s - 1) + 0.5 * np.exp(-s * lN)
    poch = s
    pw = np.exp(-(s + 1) * lN)
    for j in range(1, _ZETA_J + 1):
        total += b[j] * poch * pw
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        pw /= N * N
    return complex(total)


def riemann_zeta(s):
    """zeta(s) for complex s != 1: Euler-Maclaurin for Re s >= -1/4, reflection further left."""
    sc = complex(s)
    if sc == 1:
        raise DomainError("zeta has a pole at s = 1")
    if sc.imag == 0 and sc.real < 0 and sc.real % 2 == 0:
        v = 0j      # trivial zeros
    elif sc.real < -0.25:
        # reflection avoids the cancellation in the head sum
        v = zeta_functional_rhs(sc)
    else:
        N = max(50, int(math.ceil(abs(sc.imag))) + 10, int(abs(sc)) + 10)
        v = _zeta_em(sc, N)
    if isinstance(s, (int, float, np.floating, np.integer)):
        return v.real
    return v


def zeta_functional_rhs(s: complex) -> complex:
    """2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)."""
    s = complex(s)
    if _nonpos_int(1 - s):
        raise DomainError("reflection undefined here")
    return complex(2 ** s * math.pi ** (s - 1) * np.sin(np.pi * s / 2)
                   * gamma_complex(1 - s) * riemann_zeta(1 - s))


# ---------------------------------------------------------------------------
# Smoothing weight W2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    """Vertical line Re(w) = c, truncated at |Im w| <= T, trapezoid step.

    c=None picks c = min(1, 1/log(1/xi)) for the smallest xi requested, so
    that xi^{-c} <= e and no cancellation is needed; the step never exceeds
    c/6, which keeps the pole at w = 0 from spoiling the trapezoid rule.
    """
    c: Optional[float] = None
    T: Optional[float] = None
    step: float = 0.05
    tol: float = 1e-10

    def __post_init__(self):
        if self.c is not None and not self.c > 0:
            raise DomainError("contour must lie to the right of w = 0")
        if not self.step > 0:
            raise DomainError("step must be positive")


_LOGG14 = float(loggamma_complex(0.25).real)


def _w2_integrand_weights(c: float, step: float, T: float):
    key = (float(c), float(step), float(T))
    return _w2_weights_cached(*key)


@lru_cache(maxsize=32)
def _w2_weights_cached(c, step, T):
    K = int(math.ceil(T / step)) + 1
    t = np.arange(K) * step
    w = c + 1j * t
    G = np.exp(2.0 * (loggamma_complex(w / 2 + 0.25) - _LOGG14)) / w
    G[0] *= 0.5
    return np.ascontiguousarray(G.real), np.ascontiguousarray(G.imag)


def _w2_cutoff(c: float, xi_min: float) -> float:
    # |Gamma(w/2+1/4)|^2 decays like exp(-pi |t|/2)
    scale = max(0.0, -c * math.log(xi_min))
    T = 10.0
    while True:
        w = complex(c, T)
        mag = math.exp(2 * (float(loggamma_complex(w / 2 + 0.25).real) - _LOGG14) + scale) / abs(w)
        if mag < 1e-19 or T > 2000:
            return T
        T += 5.0


def W2(xi, contour: Optional[ContourSpec] = None):
    """(1/2 pi i) int_(c) (Gamma(w/2+1/4)/Gamma(1/4))^2 xi^{-w} dw/w.

    Accepts a scalar or an array of xi > 0.
    """
    contour = contour or ContourSpec()
    arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if (arr <= 0).any():
        raise DomainError("W2 needs xi > 0")
    c = contour.c
    if c is None:
        L = -math.log(float(arr.min()))
        c = 1.0 if L <= 1 else max(0.02, 1.0 / L)
    h = min(contour.step, c / 6)
    T = contour.T if contour.T is not None else _w2_cutoff(c, float(arr.min()))
    Gr, Gi = _w2_integrand_weights(c, h, T)
    ln = np.log(arr)
    out = _kernels.w2_sum(ln, Gr, Gi, c, h)
    # step-halving check on the extreme points
    probe = np.array([ln.min(), ln.max()])
    Gr2, Gi2 = _w2_integrand_weights(c, h / 2, T)
    fine = _kernels.w2_sum(probe, Gr2, Gi2, c, h / 2)
    coarse = _kernels.w2_sum(probe, Gr, Gi, c, h)
    if np.any(np.abs(fine - coarse) > contour.tol * np.maximum(1.0, np.abs(fine))):
        raise ConvergenceError("W2 quadrature did not stabilise under step halving")
    if np.ndim(xi) == 0:
        return float(out[0])
    return out


def phi_bump(x: float) -> float:
    """exp(1/((2x-1)(x-3))) on (1/2, 3), zero elsewhere."""
    if x <= 0.5 or x >= 3.0:
        return 0.0
    return math.exp(1.0 / ((2 * x - 1) * (x - 3)))


# ---------------------------------------------------------------------------
# Stieltjes constants
# ---------------------------------------------------------------------------

def stieltjes_gamma(j: int, terms: int = 1500) -> float:
    """Stieltjes constant gamma_j from the binomial-difference series.

    The inner alternating binomial sums are the forward differences of
    log^{j+1}(k+1) at 0, built by repeated differencing in extended
    precision (they cancel catastrophically in doubles).  The series
    converges slowly, roughly like 1/(n log n).
    """
    import mpmath
    if j < 0 or j > 3:
        raise DomainError("only 0 <= j <= 3 is supported")
    if terms < 2:
        raise DomainError("need at least two terms")
    with mpmath.workdps(30 + int(0.35 * terms)):
        row = [mpmath.log(k + 1) ** (j + 1) for k in range(terms)]
        total = mpmath.mpf(0)
        mags = []
        for n in range(terms):
            # row[0] = sum_k (-1)^k C(n,k) log^{j+1}(k+1)
            term = row[0] / (n + 1)
            total += term
            mags.append(abs(term))
            row = [row[k] - row[k + 1] for k in range(len(row) - 1)]
        out = -total / (j + 1)
    tail = mags[-5:]
    if all(tail[i] < tail[i + 1] for i in range(len(tail) - 1)):
        raise ConvergenceError("binomial series terms are growing")
    return float(out)


def stieltjes_constant(j: int, N: int = 100, M: int = 10) -> float:
    """gamma_j to near machine precision via Euler-Maclaurin on sum log^j k / k."""
    if j < 0:
        raise DomainError("j must be nonnegative")
    k = np.arange(1, N, dtype=np.float64)
    head = math.fsum(np.log(k) ** j / k)
    lN = math.log(N)
    total = head - lN ** (j + 1) / (j + 1) + 0.5 * lN ** j / N
    B = bernoulli(2 * M)
    # f^{(m)}(x) = sum_i a[i] log^i x / x^{m+1}, starting from f = log^j x / x
    a = np.zeros(j + 1)
    a[j] = 1.0
    m = 0
    for mm in range(1, 2 * M):
        b = np.zeros(j + 1)
        for i in range(j + 1):
            b[i] -= (m + 1) * a[i]
            if i > 0:
                b[i - 1] += i * a[i]
        a = b
        m += 1
        if m % 2 == 1:
            deriv = sum(a[i] * lN ** i for i in range(j + 1)) / N ** (m + 1)
            total -= B[m + 1] / math.factorial(m + 1) * deriv
    return float(total)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def const_c6(P: int = 10 ** 7) -> float:
    """(1/8) prod_{p>=3} (1-1/p) h(p), truncated at P with a first-order tail."""
    ps = sieve_primes(P).primes[1:].astype(np.float64)
    dev = -1.0 / ps ** 3 - 4.0 * (ps - 1.0) / (ps * ps * (ps + 1.0))
    logsum = math.fsum(np.log1p(dev))
    L = math.log(P)
    tail = -4.0 * exp1(L) + 7.0 * exp1(2 * L)
    return math.exp(logsum + tail) / 8.0


def const_c5(P: int = 10 ** 7) -> float:
    return const_c6(P) / (96.0 * math.pi ** 2)


@lru_cache(maxsize=1)
def const_c21() -> float:
    """exp(int_1^inf (1 - tanh x) dx/x - int_0^1 tanh x dx/x)."""
    # the integrand is below e^{-100} past x = 50
    a, _ = integrate.quad(lambda x: 2.0 * math.exp(-2 * x) / (1.0 + math.exp(-2 * x)) / x, 1, 50,
                          epsabs=1e-14, epsrel=1e-12, limit=200)
    b, _ = integrate.quad(lambda x: math.tanh(x) / x if x > 0 else 1.0, 0, 1,
                          epsabs=1e-14, epsrel=1e-12)
    return math.exp(a - b)


def _logcosh(x: float) -> float:
    if x < 20:
        sh = math.sinh(0.5 * x)
        return math.log1p(2.0 * sh * sh)
    return x + math.log1p(math.exp(-2 * x)) - math.log(2.0)


@lru_cache(maxsize=64)
def const_c20(sigma: float) -> float:
    """Constant of the large-deviation exponent for 1/2 < sigma < 1."""
    if not 0.5 < sigma < 1:
        raise DomainError("c20 needs 1/2 < sigma < 1")
    e = 1.0 / sigma
    # int_0^1 [logcosh(x)/x^2] x^{1-1/sigma} dx with an algebraic weight
    g = lambda x: _logcosh(x) / (x * x) if x > 1e-4 else 0.5 - x * x / 12
    i1, _ = integrate.quad(g, 0, 1, weight="alg", wvar=(1 - e, 0), epsabs=1e-13, epsrel=1e-12)
    i2, _ = integrate.quad(lambda x: _logcosh(x) * x ** (-e - 1), 1, np.inf,
                           epsabs=1e-13, epsrel=1e-12, limit=200)
    I = i1 + i2
    return (sigma ** (2 * sigma / (1 - sigma))
            * (1 - sigma) ** ((2 * sigma - 1) / (sigma - 1))
            * I ** (sigma / (sigma - 1)))


def const_c10(delta: float) -> float:
    """e^{1/2}/(4 pi^2) int |Gamma(it - delta)| dt (reporting only)."""
    if not 0 < delta < 1:
        raise DomainError("c10 needs 0 < delta < 1")
    f = lambda t: float(abs(np.exp(loggamma_complex(complex(-delta, t)))))
    v, _ = integrate.quad(f, 0, 80, limit=400, epsabs=1e-13)
    return math.exp(0.5) / (4 * math.pi ** 2) * 2 * v
