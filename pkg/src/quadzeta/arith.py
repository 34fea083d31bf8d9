"""Elementary arithmetic: sieves, multiplicative functions, characters.

Also holds the resonator coefficient function ``f`` and the derived
Euler factors F, G, H that the moment computations are assembled from.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import DomainError

# n above this bound is rejected by factorize (trial division stays fast)
MAX_FACTOR = 10 ** 14


# ---------------------------------------------------------------------------
# Primes and factorisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self):
        return int(self.primes.shape[0])

    def __contains__(self, p):
        i = np.searchsorted(self.primes, p)
        return i < len(self.primes) and int(self.primes[i]) == p


def sieve_primes(limit: int) -> PrimeTable:
    """All primes p <= limit (Eratosthenes on odd numbers)."""
    limit = int(limit)
    if limit < 2:
        return PrimeTable(limit, np.zeros(0, dtype=np.int64))
    is_p = np.ones(limit // 2 + 1, dtype=bool)  # index i <-> 2i+1
    is_p[0] = False
    r = int(math.isqrt(limit))
    for i in range(1, r // 2 + 1):
        if is_p[i]:
            p = 2 * i + 1
            is_p[p * p // 2::p] = False
    odd = 2 * np.nonzero(is_p)[0] + 1
    odd = odd[odd <= limit]
    return PrimeTable(limit, np.concatenate(([2], odd)).astype(np.int64))


@lru_cache(maxsize=4)
def _small_primes(limit: int) -> Tuple[int, ...]:
    return tuple(int(p) for p in sieve_primes(limit).primes)


def factorize(n: int) -> Dict[int, int]:
    """Prime factorisation {p: e} of a nonzero integer by trial division.

    The sign is dropped; 1 and -1 give {}.
    """
    n = int(n)
    if n == 0:
        raise DomainError("cannot factorize 0")
    n = abs(n)
    if n > MAX_FACTOR:
        raise DomainError(f"{n} exceeds supported magnitude {MAX_FACTOR}")
    out: Dict[int, int] = {}
    for p in _small_primes(10 ** 7 if n > 10 ** 12 else 10 ** 6):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    bases = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in bases:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def tau(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def sigma_divisors(n: int) -> int:
    """Sum of divisors."""
    return math.prod((p ** (e + 1) - 1) // (p - 1) for p, e in factorize(n).items())


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def h_func(n: int) -> Fraction:
    """Multiplicative h with h(p^k) = 1 + 1/p + 1/p^2 - 4/(p(p+1))."""
    out = Fraction(1)
    for p in factorize(n):
        out *= h_prime(p)
    return out


def h_prime(p: int) -> Fraction:
    return 1 + Fraction(1, p) + Fraction(1, p * p) - Fraction(4, p * (p + 1))


def h_float(p):
    """Float (or array) version of h at primes."""
    p = np.asarray(p, dtype=np.float64)
    return 1.0 + 1.0 / p + 1.0 / (p * p) - 4.0 / (p * (p + 1.0))


def epsilon_D(n: int, D: float) -> float:
    return float(D) ** omega(n)


def tau_sieve(n: int) -> np.ndarray:
    """tau(k) for k = 0..n (tau(0) := 0)."""
    t = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        t[k::k] += 1
    return t


def spf_sieve(n: int) -> np.ndarray:
    """Smallest prime factor table for 0..n."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in sieve_primes(int(math.isqrt(n)) + 1).primes:
        p = int(p)
        blk = spf[p * p::p]
        blk[blk == 0] = p
    idx = np.arange(n + 1)
    spf[(spf == 0) & (idx >= 2)] = idx[(spf == 0) & (idx >= 2)]
    return spf


def mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    for p in sieve_primes(n).primes:
        p = int(p)
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p::p * p] = 0
    return mu


# ---------------------------------------------------------------------------
# Resonator coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompletelyMultiplicativeF:
    """Completely multiplicative f given by its values at primes.

    ``center``: f(p) = L/(sqrt(p) log p) on L^2 <= p <= upper, where
    upper = exp(log^2 L) unless ``upper`` is given.
    ``right``: f(p) = L p^{-sigma} for p >= L^{1/sigma}.
    ``support`` optionally restricts f to an explicit finite prime set.
    """
    regime: str
    L: float
    sigma: float = 0.5
    upper: Optional[float] = None
    support: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.regime not in ("center", "right"):
            raise DomainError(f"unknown regime {self.regime!r}")
        if not self.L > 0:
            raise DomainError("L must be positive")
        if self.regime == "right" and not (0.5 < self.sigma < 1):
            raise DomainError("right regime needs 1/2 < sigma < 1")

    @property
    def lower(self) -> float:
        if self.regime == "center":
            return self.L ** 2
        return self.L ** (1.0 / self.sigma)

    @property
    def upper_bound(self) -> float:
        if self.regime == "right":
            return math.inf
        if self.upper is not None:
            return float(self.upper)
        return math.exp(math.log(self.L) ** 2) if self.L > 1 else 0.0

    def at_prime(self, p: int) -> float:
        if self.support is not None and int(p) not in self.support:
            return 0.0
        if p < self.lower or p > self.upper_bound:
            return 0.0
        if self.regime == "center":
            return self.L / (math.sqrt(p) * math.log(p))
        return self.L * p ** (-self.sigma)

    def at_primes(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        if self.regime == "center":
            v = self.L / (np.sqrt(p) * np.log(p))
        else:
            v = self.L * p ** (-self.sigma)
        ok = (p >= self.lower) & (p <= self.upper_bound)
        if self.support is not None:
            ok &= np.isin(p.astype(np.int64), np.asarray(self.support, dtype=np.int64))
        return np.where(ok, v, 0.0)

    def __call__(self, n: int) -> float:
        out = 1.0
        for p, e in factorize(n).items():
            v = self.at_prime(p)
            if v == 0.0:
                return 0.0
            out *= v ** e
        return out

    def support_primes(self, cutoff: Optional[float] = None) -> List[int]:
        hi = self.upper_bound if cutoff is None else min(self.upper_bound, cutoff)
        if not math.isfinite(hi):
            raise DomainError("infinite support needs a cutoff")
        if self.support is not None:
            return sorted(p for p in self.support if self.at_prime(p) > 0 and p <= hi)
        ps = sieve_primes(int(hi)).primes
        return [int(p) for p in ps if p >= self.lower]


def resonator_f(p: int, spec: CompletelyMultiplicativeF) -> float:
    return spec.at_prime(p)


@dataclass(frozen=True)
class FGH:
    F: float
    G: float
    H: float


def FGH_values(p: int, k: int, spec: CompletelyMultiplicativeF) -> FGH:
    """Euler-factor values F(p^k), G(p^k), H(p^k); (1, 0, 0) off support."""
    f = spec.at_prime(p)
    if f == 0.0:
        return FGH(1.0, 0.0, 0.0)
    h = float(h_prime(p))
    sp = math.sqrt(p)
    F = 1.0 + f * f / h - 4.0 * f * sp / (h * (p + 1))
    G = (math.log(p) / p ** 2) * f * f / (h * F)
    H = -4.0 * math.log(p) ** k * f * sp / (h * (p + 1) * F)
    return FGH(F, G, H)


def H_func(n: int, spec: CompletelyMultiplicativeF) -> float:
    """Multiplicative extension of H."""
    out = 1.0
    for p, e in factorize(n).items():
        out *= FGH_values(p, e, spec).H
        if out == 0.0:
            return 0.0
    return out


def H11(p: int) -> float:
    """Normalised first log-derivative of the local ratio G_p at alpha=1, p | l1."""
    from .analytic import Gp_ratio
    return Gp_ratio(1, p, p) * p / math.log(p)


def M_func(n: int, spec: CompletelyMultiplicativeF) -> float:
    """M(n) = (1/omega(n)) (sum_{p|n} H11(p)/p) H(n); M(1) = 0."""
    if n == 1:
        return 0.0
    ps = list(factorize(n))
    return sum(H11(p) / p for p in ps) / len(ps) * H_func(n, spec)


# ---------------------------------------------------------------------------
# Characters and discriminants
# ---------------------------------------------------------------------------

def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n)."""
    return int(_kernels._kron_scalar(int(d), int(n)))


def chi_table(d: int, m: Optional[int] = None) -> np.ndarray:
    """Values chi_d(0..m-1); default one period |d|."""
    if m is None:
        m = abs(d)
    return np.asarray(_kernels.kronecker_table(int(d), int(m)))


def is_fundamental(d: int) -> bool:
    """Fundamental discriminant test (d = 1 is excluded)."""
    d = int(d)
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def enumerate_fundamental(lo: int, hi: int, sign: int = 1) -> List[int]:
    """Fundamental discriminants with lo <= |d| <= hi of the given sign."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    return [sign * m for m in range(max(1, lo), hi + 1) if is_fundamental(sign * m)]


def enumerate_8d_family(X: float, lo_frac: float = 1 / 16, hi_frac: float = 1 / 8) -> List[int]:
    """Odd squarefree d with lo_frac*X <= d <= hi_frac*X (so 8d is fundamental)."""
    lo = max(1, math.ceil(lo_frac * X - 1e-9))
    hi = math.floor(hi_frac * X + 1e-9)
    if hi < lo:
        return []
    mu = mobius_sieve(hi)
    return [d for d in range(lo, hi + 1) if d % 2 == 1 and mu[d] != 0]


def crt(residues: Sequence[int], moduli: Sequence[int]) -> Tuple[int, int]:
    """Solve x = r_i mod m_i for pairwise coprime moduli; returns (x, M)."""
    if len(residues) != len(moduli):
        raise DomainError("residues and moduli differ in length")
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if m <= 0:
            raise DomainError("moduli must be positive")
        if math.gcd(M, m) != 1:
            raise DomainError("moduli are not pairwise coprime")
        t = ((r - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M
