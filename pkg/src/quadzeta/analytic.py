"""Euler products, Laurent algebra and the residue engine behind the moments.

eta(alpha; l) is a product of local factors that are all finite sums
sum_k c_k p^{-k alpha} (k <= 3), so values and alpha-derivatives come
from one coefficient matrix.  The tail over p > P uses the leading
asymptotic  log eta_p ~ -3 p^{-alpha-1} - p^{-2 alpha}, summed against the
prime density 1/log t, which gives exponential integrals.
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import exp1, polygamma

from .arith import (CompletelyMultiplicativeF, FGH_values, H_func, factorize, h_float,
                    h_func, sieve_primes, sigma_divisors, spf_sieve, tau)
from .errors import ConvergenceError, DomainError
from .special import const_c6, loggamma_complex, riemann_zeta, stieltjes_constant


# ---------------------------------------------------------------------------
# l = l1 * l2^2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaIndex:
    l: int
    l1: int
    l2: int
    odd_primes: Tuple[int, ...]    # primes with odd exponent (divide l1)
    even_primes: Tuple[int, ...]   # primes with even exponent


def decompose_l(l: int) -> EtaIndex:
    """Split l = l1 * l2^2 with l1 the squarefree part of l."""
    if l < 1:
        raise DomainError("l must be >= 1")
    fac = factorize(l)
    odd = tuple(sorted(p for p, e in fac.items() if e % 2))
    even = tuple(sorted(p for p, e in fac.items() if e % 2 == 0))
    l1 = math.prod(odd)
    l2 = math.isqrt(l // l1)
    return EtaIndex(l, l1, l2, odd, even)


# ---------------------------------------------------------------------------
# Local factors
# ---------------------------------------------------------------------------

def _eta_coeffs(ps: np.ndarray, idx: EtaIndex) -> np.ndarray:
    """Coefficients c_k with eta_p(alpha) = sum_k c_k p^{-k alpha}."""
    p = ps.astype(np.float64)
    C = np.zeros((p.shape[0], 4))
    C[:, 0] = 1.0
    C[:, 1] = -3.0 / (p + 1)
    C[:, 2] = -(p - 3.0) / (p + 1)
    C[:, 3] = -1.0 / (p + 1)
    odd = np.isin(ps, np.asarray(idx.odd_primes, dtype=np.int64))
    even = np.isin(ps, np.asarray(idx.even_primes, dtype=np.int64))
    w = p / (p + 1)
    C[odd] = 0.0
    C[odd, 0] = w[odd]
    C[odd, 1] = -w[odd]
    C[even] = 0.0
    C[even, 0] = w[even]
    C[even, 2] = -w[even]
    two = ps == 2
    C[two] = [1.0, -3.0, 3.0, -1.0]
    return C


def _eta_derivs(alpha, ps: np.ndarray, idx: EtaIndex, order: int) -> np.ndarray:
    """Array [i, prime] of eta_p^{(i)}(alpha; l) for i = 0..order."""
    C = _eta_coeffs(ps, idx)
    lp = np.log(ps.astype(np.float64))
    k = np.arange(4)
    base = np.exp(-np.outer(lp, k) * alpha)          # p^{-k alpha}
    out = []
    for i in range(order + 1):
        fac = (-np.outer(lp, k)) ** i
        out.append(np.sum(C * fac * base, axis=1))
    return np.array(out)


def eta_p(alpha, l: int, p: int):
    """Local factor eta_p(alpha; l)."""
    if np.real(alpha) <= 0.5:
        raise DomainError("need Re(alpha) > 1/2")
    return _eta_derivs(alpha, np.array([p], dtype=np.int64), decompose_l(l), 0)[0, 0]


def eta_p_deriv(i: int, alpha, l: int, p: int):
    """i-th alpha-derivative of eta_p(alpha; l)."""
    return _eta_derivs(alpha, np.array([p], dtype=np.int64), decompose_l(l), i)[i, 0]


def _E1_deriv(k: int, z):
    """k-th derivative of E1 at z."""
    if k == 0:
        return exp1(z)
    s = sum(math.comb(k - 1, j) * math.factorial(j) / z ** (j + 1) for j in range(k))
    return (-1) ** k * np.exp(-z) * s


def eta_tail_model(alpha, P: int, k: int = 0):
    """k-th alpha-derivative of the modelled sum_{p>P} log eta_p(alpha; 1)."""
    L = math.log(P)
    return (-3.0 * L ** k * _E1_deriv(k, alpha * L)
            - (2 * L) ** k * _E1_deriv(k, (2 * alpha - 1) * L))


@dataclass(frozen=True)
class EulerProductSpec:
    """Prime cutoff and tail treatment for eta products."""
    P: int = 10 ** 6
    tail: str = "model"      # "model" or "none"
    tol: Optional[float] = None


@dataclass(frozen=True)
class EulerProductResult:
    value: complex
    tail_bound: float

    def __iter__(self):
        return iter((self.value, self.tail_bound))


@lru_cache(maxsize=8)
def _primes_upto(P: int) -> np.ndarray:
    return sieve_primes(P).primes


def _log_eta_sum(alpha, idx: EtaIndex, P: int):
    ps = _primes_upto(P)
    if idx.l > 1 and max(idx.odd_primes + idx.even_primes) > P:
        raise DomainError("prime cutoff must exceed the primes dividing l")
    vals = _eta_derivs(alpha, ps, idx, 0)[0]
    logs = np.log(vals.astype(np.complex128)) if np.iscomplexobj(vals) or (vals <= 0).any() else np.log(vals)
    if np.iscomplexobj(logs):
        return complex(math.fsum(logs.real), math.fsum(logs.imag))
    return math.fsum(logs)


def eta_product(alpha, l: int, spec=None) -> EulerProductResult:
    """eta(alpha; l) as a product over p <= P with a modelled tail.

    ``spec`` may be an :class:`EulerProductSpec` or a bare cutoff P.
    tail_bound estimates the relative uncertainty left after the tail
    correction (the correction size divided by log P).
    """
    if spec is None:
        spec = EulerProductSpec()
    elif not isinstance(spec, EulerProductSpec):
        spec = EulerProductSpec(P=int(spec))
    if np.real(alpha) <= 0.5:
        raise DomainError("need Re(alpha) > 1/2")
    idx = decompose_l(l)
    s = _log_eta_sum(alpha, idx, spec.P)
    if spec.tail == "model":
        T = eta_tail_model(alpha, spec.P)
        bound = abs(T) / math.log(spec.P)
    else:
        T = 0.0
        a = float(np.real(alpha))
        e = min(a + 1.0, 2.0 * a)
        bound = 10.0 * spec.P ** (1.0 - e) / (e - 1.0)
    val = np.exp(s + T)
    if not np.iscomplexobj(val) or abs(np.imag(val)) == 0 and np.isrealobj(alpha):
        val = float(np.real(val))
    if spec.tol is not None and bound > spec.tol:
        raise ConvergenceError(f"eta tail bound {bound:.3g} exceeds tolerance {spec.tol:.3g}")
    return EulerProductResult(val, bound)


def eta_log_derivatives(l: int, P: int = 10 ** 6, order: int = 3, alpha: float = 1.0) -> np.ndarray:
    """[log eta, (log eta)', ..., (log eta)^{(order)}] at alpha, tail included."""
    if order > 3:
        raise DomainError("order <= 3 supported")
    idx = decompose_l(l)
    ps = _primes_upto(P)
    D = _eta_derivs(alpha, ps, idx, order)
    r = [D[i] / D[0] for i in range(order + 1)]
    comps = [np.log(D[0])]
    if order >= 1:
        comps.append(r[1])
    if order >= 2:
        comps.append(r[2] - r[1] ** 2)
    if order >= 3:
        comps.append(r[3] - 3 * r[2] * r[1] + 2 * r[1] ** 3)
    out = np.array([math.fsum(c) for c in comps])
    out += np.array([eta_tail_model(alpha, P, k) for k in range(order + 1)])
    return out


def eta_closed_form_1(a: int, r: int, s: int) -> float:
    """c6 * rs / (sigma(rs) h(ars)) for odd, pairwise coprime a, r, s."""
    if min(a, r, s) < 1:
        raise DomainError("a, r, s must be positive")
    if math.gcd(a, r) != 1 or math.gcd(a, s) != 1 or math.gcd(r, s) != 1:
        raise DomainError("a, r, s must be pairwise coprime")
    if any(e > 1 for e in factorize(r).values()) or any(e > 1 for e in factorize(s).values()):
        raise DomainError("r and s must be squarefree")
    if (a * r * s) % 2 == 0:
        # the 2-factor of eta does not depend on l, the closed form assumes ars odd
        raise DomainError("closed form holds for odd a, r, s")
    rs = r * s
    return const_c6() * rs / (sigma_divisors(rs) * float(h_func(a * rs)))


# ---------------------------------------------------------------------------
# G_p = eta_p(alpha; l) / eta_p(alpha; 1)
# ---------------------------------------------------------------------------

def Gp_ratio(i: int, p: int, l: int, alpha: float = 1.0) -> float:
    """G_p^{(i)}(alpha; l) / G_p(alpha; l) for i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise DomainError("i must be 1, 2 or 3")
    if l % p:
        return 0.0
    ps = np.array([p], dtype=np.int64)
    u = _eta_derivs(alpha, ps, decompose_l(l), 3)[:, 0]
    v = _eta_derivs(alpha, ps, decompose_l(1), 3)[:, 0]
    u1, u2, u3 = u[1] / u[0], u[2] / u[0], u[3] / u[0]
    v1, v2, v3 = v[1] / v[0], v[2] / v[0], v[3] / v[0]
    if i == 1:
        return float(u1 - v1)
    if i == 2:
        return float(u2 - 2 * u1 * v1 + 2 * v1 ** 2 - v2)
    return float(u3 - 3 * (u2 * v1 + u1 * v2) + 6 * u1 * v1 ** 2 - v3 - 6 * v1 ** 3 + 6 * v1 * v2)


def c2_const(i: int) -> float:
    """Limit of Gp_ratio(i, p, l) * p / log^i p for p | l1."""
    return float((-1) ** (i + 1))


def c3_const(i: int) -> float:
    """Limit of Gp_ratio(i, p, l) * p^2 / log^i p for p^2 || l."""
    return float(3 * (-1) ** i)


# ---------------------------------------------------------------------------
# A_{alpha1, alpha2}(l)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AValue:
    value: float
    remainder: float

    def __float__(self):
        return float(self.value)


def A_func(alpha1: float, alpha2: float, l: int, truncation: int = 20001,
           tol: Optional[float] = None) -> AValue:
    """Truncated sum over odd m <= truncation of the divisor-weighted series.

    sum_m (1/m) (sum_{n1 n2 = l1 m^2} n1^{-a1} n2^{-a2}) prod_{p | lm} p/(p+1).
    """
    a = min(alpha1, alpha2)
    if a <= 0:
        raise DomainError("need alpha1, alpha2 > 0")
    idx = decompose_l(l)
    lfac = factorize(l)
    l1fac = {p: 1 for p in idx.odd_primes}
    spf = spf_sieve(max(truncation, 2))
    terms = []
    for m in range(1, truncation + 1, 2):
        fac = dict()
        x = m
        while x > 1:
            p = int(spf[x])
            fac[p] = fac.get(p, 0) + 1
            x //= p
        k = dict(l1fac)
        for p, e in fac.items():
            k[p] = k.get(p, 0) + 2 * e
        dsum = 1.0
        for p, e in k.items():
            dsum *= sum(p ** (-j * alpha1 - (e - j) * alpha2) for j in range(e + 1))
        prod = 1.0
        for p in set(lfac) | set(fac):
            prod *= p / (p + 1)
        terms.append(dsum * prod / m)
    val = math.fsum(terms)
    # envelope tau(l1) l1^{-a} tau(m^2) m^{-1-2a}, with sum_{m<=x} tau(m^2) ~ x log^2 x / (2 zeta(2))
    M = float(truncation)
    b = 2 * a
    lm = math.log(M)
    env = M ** (-b) * ((lm * lm / b + 2 * lm / b ** 2 + 2 / b ** 3) + 2 * (lm / b + 1 / b ** 2))
    rem = tau(idx.l1) * idx.l1 ** (-a) * env / (2 * math.pi ** 2 / 6)
    if tol is not None and rem > tol:
        raise ConvergenceError("A_func remainder exceeds tolerance; raise the truncation")
    return AValue(val, rem)


# ---------------------------------------------------------------------------
# Laurent algebra
# ---------------------------------------------------------------------------

@dataclass
class LaurentSeries:
    """sum_i coefficients[i] w^{i - pole_order}, truncated."""
    pole_order: int
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)

    @property
    def max_power(self) -> int:
        return len(self.coefficients) - 1 - self.pole_order

    def coeff(self, k: int) -> float:
        i = k + self.pole_order
        if 0 <= i < len(self.coefficients):
            return float(self.coefficients[i])
        if i < 0:
            return 0.0
        raise DomainError(f"coefficient w^{k} beyond truncation")

    def mul(self, other: "LaurentSeries", max_power: Optional[int] = None) -> "LaurentSeries":
        po = self.pole_order + other.pole_order
        top = min(self.max_power - other.pole_order, other.max_power - self.pole_order)
        if max_power is not None:
            top = min(top, max_power)
        c = np.convolve(self.coefficients, other.coefficients)[: top + po + 1]
        return LaurentSeries(po, c)

    __mul__ = mul

    def scale(self, x: float) -> "LaurentSeries":
        return LaurentSeries(self.pole_order, self.coefficients * x)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by w^k."""
        return LaurentSeries(self.pole_order - k, self.coefficients.copy())


def _taylor(coeffs: Sequence[float]) -> LaurentSeries:
    return LaurentSeries(0, np.asarray(coeffs, dtype=np.float64))


def _exp_series(a: Sequence[float]) -> np.ndarray:
    """Taylor coefficients of exp(sum_{k>=1} a[k] w^k) up to len(a)-1."""
    n = len(a)
    b = np.zeros(n)
    b[0] = 1.0
    for m in range(1, n):
        b[m] = sum(k * a[k] * b[m - k] for k in range(1, m + 1)) / m
    return b


def zeta_laurent(order: int = 3) -> LaurentSeries:
    """Laurent expansion of zeta(1+2w) at w = 0 through w^order."""
    if order < 0 or order > 3:
        raise DomainError("order must be in 0..3")
    c = [0.5] + [(-2.0) ** j * stieltjes_constant(j) / math.factorial(j) for j in range(order + 1)]
    return LaurentSeries(1, c)


# ---------------------------------------------------------------------------
# Residue engine
# ---------------------------------------------------------------------------

def _check_triple(a: int, r: int, s: int):
    if min(a, r, s) < 1:
        raise DomainError("a, r, s must be positive")
    if math.gcd(a, r) != 1 or math.gcd(a, s) != 1 or math.gcd(r, s) != 1:
        raise DomainError("a, r, s must be pairwise coprime")
    for v in (r, s):
        if any(e > 1 for e in factorize(v).values()):
            raise DomainError("r and s must be squarefree")


def residue_factors(X: float, a: int, r: int, s: int, P: int = 10 ** 6,
                    order: int = 3) -> Dict[str, LaurentSeries]:
    """Expansions at w = 0 of every factor of the residue integrand."""
    K = order
    psi = [polygamma(k - 1, 0.25) for k in range(1, K + 1)]
    ga = [0.0] + [2.0 * psi[k - 1] * 0.5 ** k / math.factorial(k) for k in range(1, K + 1)]
    lam = math.log(X / (2 * r * s * math.pi))
    ln2 = math.log(2.0)
    num = [1.0] + [2.0 * ln2 ** n / math.factorial(n) for n in range(1, K + 1)]
    geo = [(-1.0) ** k for k in range(K + 1)]
    integ = np.convolve(num, geo)[: K + 1]
    ld = eta_log_derivatives(a * a * r * s, P=P, order=K)
    el = [0.0] + [ld[k] * 2.0 ** k / math.factorial(k) for k in range(1, K + 1)]
    return {
        "gamma_square": _taylor(_exp_series(ga)),
        "power": _taylor([lam ** n / math.factorial(n) for n in range(K + 1)]),
        "t_integral": _taylor(integ),
        "zeta_cubed": zeta_laurent(K) * zeta_laurent(K) * zeta_laurent(K),
        "eta": _taylor(math.exp(ld[0]) * _exp_series(el)),
    }


def residue_lemma(X: float, a: int, r: int, s: int, mode: str = "series",
                  P: int = 10 ** 6, gamma_scale: float = 1.0) -> float:
    """Residue at w = 0 of the main-term integrand of the first moment.

    mode="series" multiplies the Laurent expansions and reads off the w^{-1}
    coefficient; mode="leading" returns (c6/48) rs/(sigma(rs) h(ars)) log^3(X/rs).
    """
    _check_triple(a, r, s)
    if X <= r * s:
        raise DomainError("need X > rs")
    if mode == "leading":
        rs = r * s
        return const_c6() / 48.0 * rs / (sigma_divisors(rs) * float(h_func(a * rs))) * math.log(X / rs) ** 3
    if mode != "series":
        raise DomainError(f"unknown mode {mode!r}")
    f = residue_factors(X, a, r, s, P)
    prod = f["gamma_square"].scale(gamma_scale)
    for key in ("power", "t_integral", "zeta_cubed", "eta"):
        prod = prod.mul(f[key])
    prod = prod.shift(-1)   # the 1/w
    return prod.coeff(-1)


def residue_integrand(w: complex, X: float, a: int, r: int, s: int, P: int = 10 ** 6) -> complex:
    """The integrand itself, at complex w near 0."""
    g = np.exp(2 * (loggamma_complex(w / 2 + 0.25) - loggamma_complex(0.25)))
    pw = np.exp(w * math.log(X / (2 * r * s * math.pi)))
    ti = (2 ** (w + 1) - 1) / (w + 1)
    z = riemann_zeta(1 + 2 * w)
    e = eta_product(1 + 2 * w, a * a * r * s, P).value
    return complex(g * pw * ti * z ** 3 * e / w)


def residue_contour(X: float, a: int, r: int, s: int, radius: float = 0.1,
                    M: int = 64, P: int = 10 ** 6) -> float:
    """Residue by trapezoid quadrature on the circle |w| = radius."""
    _check_triple(a, r, s)
    acc = 0.0 + 0.0j
    for m in range(M):
        w = radius * np.exp(2j * math.pi * (m + 0.5) / M)
        acc += residue_integrand(w, X, a, r, s, P) * w
    return float((acc / M).real)


# ---------------------------------------------------------------------------
# Multiplicative identities and predicted products
# ---------------------------------------------------------------------------

def _restricted(spec: CompletelyMultiplicativeF, support: Iterable[int]) -> CompletelyMultiplicativeF:
    return CompletelyMultiplicativeF(spec.regime, spec.L, spec.sigma, spec.upper, tuple(sorted(support)))


def multiplicative_identity_check(prime_support: Iterable[int], t: int,
                                  spec: CompletelyMultiplicativeF) -> Tuple[float, float]:
    """Brute-force weighted triple sum vs (sum of H over t-tuples) * prod F.

    Weights are mu(a)^2 f(a)^2/h(a) * prod over r and s of
    mu f tau sqrt(.)/(sigma h), multiplied by log^t(rs).
    """
    S = sorted(set(int(p) for p in prime_support))
    if t < 1 or t > 3:
        raise DomainError("t must be in 1..3")
    if not S:
        return 0.0, 0.0
    fs = _restricted(spec, S)
    wa, wr, lg = [], [], []
    for p in S:
        f = fs.at_prime(p)
        h = float(h_func(p))
        wa.append(f * f / h)
        wr.append(-2.0 * f * math.sqrt(p) / ((p + 1) * h))
        lg.append(math.log(p))
    terms = []
    for assign in itertools.product(range(4), repeat=len(S)):   # 0 none, 1 a, 2 r, 3 s
        w = 1.0
        logrs = 0.0
        for i, c in enumerate(assign):
            if c == 1:
                w *= wa[i]
            elif c >= 2:
                w *= wr[i]
                logrs += lg[i]
        terms.append(w * logrs ** t)
    lhs = math.fsum(terms)
    hs = math.fsum(H_func(math.prod(tup), fs) for tup in itertools.product(S, repeat=t))
    rhs = hs * math.prod(FGH_values(p, 1, fs).F for p in S)
    return lhs, rhs


_KIND_K = {"m1_center": 2.0, "m2_center": 4.0, "m1_right": 2.0, "m2_right": 4.0}


def predicted_product(kind: str, spec: CompletelyMultiplicativeF, D: Optional[float] = None,
                      cutoff: Optional[float] = None) -> float:
    """prod_p (1 + f(p)^2 - k f(p)/p^sigma) over the (truncated) support of f."""
    if kind == "D_general":
        if D is None:
            raise DomainError("D_general needs D")
        k = 2.0 * D
    elif kind in _KIND_K:
        k = _KIND_K[kind]
    else:
        raise DomainError(f"unknown kind {kind!r}")
    if kind.endswith("center"):
        sig = 0.5
    elif kind.endswith("right"):
        sig = spec.sigma
    else:
        sig = 0.5 if spec.regime == "center" else spec.sigma
    if spec.regime == "right" and cutoff is None and spec.support is None:
        raise DomainError("right-regime support is infinite, pass a cutoff")
    ps = np.asarray(spec.support_primes(cutoff), dtype=np.float64)
    if ps.size == 0:
        return 1.0
    f = spec.at_primes(ps)
    fac = 1 + f * f - k * f / ps ** sig
    # small-L right-regime resonators can give negative factors at the first primes
    sign = -1.0 if np.count_nonzero(fac < 0) % 2 else 1.0
    return sign * float(np.exp(math.fsum(np.log(np.abs(fac)))))


def rankin_tail(spec: CompletelyMultiplicativeF, N: float, alpha: float, D: float = 2.0,
                cutoff: Optional[float] = None) -> Tuple[float, float]:
    """Tail (ar > N or as > N) of the absolute triple sum and its Rankin majorant.

    Center regime: pairwise coprime (a, r, s), weight
    f(a)^2/h(a) * f(r) tau(r) sqrt(r)/(sigma(r) h(r)) * (same for s);
    majorant N^{-alpha} prod (1 + f^2 p^alpha + 4 f p^{alpha - 1/2}).
    Right regime: unrestricted squarefree (a, r, s), weight
    f(a)^2 f(r) D^{omega(r)}/r^sigma f(s) D^{omega(s)}/s^sigma; majorant
    2 N^{-alpha} prod(1 + D f/p^sigma) prod(1 + f^2 p^alpha + D f p^{alpha-sigma}).
    """
    ps = spec.support_primes(cutoff)
    if not ps:
        return 0.0, 0.0
    f = {p: spec.at_prime(p) for p in ps}
    if spec.regime == "center":
        if len(ps) > 14:
            raise DomainError("center brute force limited to 14 support primes")
        wa = {p: f[p] ** 2 / float(h_func(p)) for p in ps}
        wr = {p: 2 * f[p] * math.sqrt(p) / ((p + 1) * float(h_func(p))) for p in ps}
        tail = []
        for assign in itertools.product(range(4), repeat=len(ps)):
            a = r = s = 1
            w = 1.0
            for p, c in zip(ps, assign):
                if c == 1:
                    a *= p
                    w *= wa[p]
                elif c == 2:
                    r *= p
                    w *= wr[p]
                elif c == 3:
                    s *= p
                    w *= wr[p]
            if a * r > N or a * s > N:
                tail.append(w)
        emp = math.fsum(tail)
        bound = N ** (-alpha) * math.prod(1 + f[p] ** 2 * p ** alpha + 4 * f[p] * p ** (alpha - 0.5)
                                          for p in ps)
        return emp, bound
    sig = spec.sigma
    if not 0 < alpha < 2 * sig - 1:
        raise DomainError("right regime needs 0 < alpha < 2 sigma - 1")
    wa = {p: f[p] ** 2 for p in ps}
    wr = {p: D * f[p] / p ** sig for p in ps}
    total = math.prod(1 + wa[p] for p in ps) * math.prod(1 + wr[p] for p in ps) ** 2
    # complement: ar <= N and as <= N, which factors over a
    sq_a = _squarefree_products(ps, N, wa)
    sq_r = _squarefree_products(ps, N, wr)
    vals = np.array([v for v, _ in sq_r])
    cum = np.cumsum([w for _, w in sq_r])
    inside = []
    for av, aw in sq_a:
        j = np.searchsorted(vals, N / av, side="right")
        W = cum[j - 1] if j > 0 else 0.0
        inside.append(aw * W * W)
    emp = total - math.fsum(inside)
    bound = (2 * N ** (-alpha) * math.prod(1 + wr[p] for p in ps)
             * math.prod(1 + f[p] ** 2 * p ** alpha + D * f[p] * p ** (alpha - sig) for p in ps))
    return max(emp, 0.0), bound


def _squarefree_products(ps: List[int], N: float, w: Dict[int, float]) -> List[Tuple[int, float]]:
    """All squarefree n <= N over ps with multiplicative weight, sorted by n."""
    out = [(1, 1.0)]
    for p in ps:
        if p > N:
            break
        out += [(n * p, v * w[p]) for n, v in out if n * p <= N]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

def identity_suite(seed: int = 0, triples: int = 10, P: int = 10 ** 6) -> Dict[str, dict]:
    """Run the exact finite identities and report the largest deviations.

    Euler product vs closed form at alpha = 1, the weighted triple sum vs its
    factorization, and the residue Laurent algebra vs contour quadrature.
    """
    rng = np.random.default_rng(seed)
    odd = [int(p) for p in sieve_primes(100).primes if p > 2]
    report: Dict[str, dict] = {}

    dev = 0.0
    for _ in range(triples):
        ps = [int(x) for x in rng.choice(odd, size=3, replace=False)]
        a, r, s = ps[0] ** int(rng.integers(1, 3)), ps[1], ps[2]
        prod = eta_product(1.0, a * a * r * s, P).value
        dev = max(dev, abs(prod / eta_closed_form_1(a, r, s) - 1))
    report["euler_product_closed_form"] = {"max_deviation": dev, "tolerance": 1e-8,
                                           "cases": triples, "passed": dev <= 1e-8}

    dev, cases = 0.0, 0
    f = CompletelyMultiplicativeF("right", 1.5, 0.75)
    for S in ([11], [11, 13], [3, 7, 11]):
        for t in (1, 2, 3):
            lhs, rhs = multiplicative_identity_check(S, t, f)
            dev = max(dev, abs(lhs - rhs) / max(1.0, abs(rhs)))
            cases += 1
    report["multiplicative_identity"] = {"max_deviation": dev, "tolerance": 1e-10,
                                         "cases": cases, "passed": dev <= 1e-10}

    dev = 0.0
    configs = [(1e4, 1, 1, 1), (1e5, 1, 3, 5)]
    for X, a, r, s in configs:
        ser = residue_lemma(X, a, r, s, P=P)
        con = residue_contour(X, a, r, s, P=P)
        dev = max(dev, abs(ser - con) / abs(con))
    report["residue_series_contour"] = {"max_deviation": dev, "tolerance": 1e-6,
                                        "cases": len(configs), "passed": dev <= 1e-6}
    return report
