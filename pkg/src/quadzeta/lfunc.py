"""Quadratic Dirichlet L-values and Dedekind zeta values of quadratic fields.

L(s, chi_d) is summed directly over K full periods of chi_d; the rest,
sum_a chi(a) sum_{k>=K} (a + k|d|)^{-s}, is a combination of Hurwitz
zeta tails evaluated by Euler-Maclaurin.  This gives the analytic
continuation to every s != 1 at no extra cost, and the first omitted
Euler-Maclaurin term is the error estimate.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .arith import chi_table, enumerate_8d_family, is_fundamental, kronecker, tau_sieve
from .errors import ConvergenceError, DomainError
from .special import ContourSpec, W2, phi_bump, riemann_zeta

_EM_TERMS = 8
_EPS = 2.2e-16


@dataclass(frozen=True)
class LValueResult:
    value: complex
    error_estimate: float
    terms_used: int


@lru_cache(maxsize=4)
def _bern():
    return _kernels._bernoulli_ratios(_EM_TERMS)


@lru_cache(maxsize=512)
def _period(d: int) -> np.ndarray:
    return chi_table(d, abs(d))


def L_direct(s, d: int, budget: Optional[int] = None) -> LValueResult:
    """L(s, chi_d) for a fundamental discriminant d != 1 and any s != 1 (complex ok).

    ``budget`` caps the number of directly summed terms; at least 8 full
    periods are always used.
    """
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    q = abs(d)
    sc = complex(s)
    K = max(8, int(math.ceil(abs(sc))) + 2)
    if budget is not None:
        if budget < q:
            raise DomainError("budget smaller than one period")
        K = max(2, budget // q)
    real = sc.imag == 0
    arg = sc.real if real else sc
    val, err, absum = _kernels.l_series_em(_period(d), arg, K, _bern())
    err = float(err) + 4 * _EPS * float(absum)
    value = float(np.real(val)) if real else complex(val)
    return LValueResult(value, err, K * q)


def L_value(s, d: int) -> float:
    return L_direct(s, d).value


def L_half_square(d: int, contour: Optional[ContourSpec] = None, xi_max: float = 40.0) -> float:
    """L(1/2, chi_{8d})^2 from 2 sum tau(n)/sqrt(n) chi_{8d}(n) W2(n pi/(8d)).

    d is an odd squarefree positive integer.  Negative round-off is clamped to 0.
    """
    if d < 1 or d % 2 == 0 or not is_fundamental(8 * d):
        raise DomainError("need odd squarefree d >= 1")
    D = 8 * d
    N = int(xi_max * D / math.pi)
    n = np.arange(1, N + 1)
    chi = chi_table(D, D)[n % D].astype(np.float64)
    keep = chi != 0
    n = n[keep]
    t = tau_sieve(N)[n].astype(np.float64)
    w = W2(n * (math.pi / D), contour)
    total = 2.0 * math.fsum(t / np.sqrt(n) * chi[keep] * w)
    return max(total, 0.0)


def L_twisted_exp(sigma: float, d: int, X: float, tol: float = 1e-17) -> float:
    """sum chi_d(n) n^{-sigma} exp(-n / X^2), truncated where the weight < tol."""
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    Y = float(X) ** 2
    nmax = int(math.ceil(Y * math.log(1.0 / tol)))
    return float(_kernels.twisted_sum(_period(d), float(sigma), Y, nmax))


def dedekind_quadratic(s, d: int):
    """zeta_{Q(sqrt d)}(s) = zeta(s) L(s, chi_d)."""
    if complex(s) == 1:
        raise DomainError("Dedekind zeta has a pole at s = 1")
    z = riemann_zeta(s)
    L = L_direct(s, d).value
    return z * L


def sono_M(alpha1, alpha2, l: int, X: float) -> complex:
    """sum over odd squarefree d in (X/2, 3X) of L(1/2+a1) L(1/2+a2) chi_{8d}(l) Phi(d/X)."""
    if X <= 0:
        raise DomainError("X must be positive")
    lo = math.floor(X / 2) + 1
    hi = math.ceil(3 * X) - 1
    ds = [d for d in range(max(1, lo), hi + 1) if d % 2 == 1 and is_fundamental(8 * d)]
    parts = []
    for d in ds:
        w = phi_bump(d / X)
        if w == 0.0:
            continue
        c = kronecker(8 * d, l)
        if c == 0:
            continue
        v = L_direct(0.5 + alpha1, 8 * d).value * L_direct(0.5 + alpha2, 8 * d).value * c * w
        parts.append(complex(v))
    tot = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return tot.real if tot.imag == 0 else tot
