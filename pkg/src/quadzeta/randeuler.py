"""Random Euler products and value-distribution densities.

Samples of prod_{p <= y} (1 - X_p p^{-sigma})^{-1} with independent fair
signs X_p.  Randomness is drawn in fixed blocks of BLOCK samples, each
keyed by (seed, block index), so the stream does not depend on how the
work is split between threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Sequence

import numpy as np

from .arith import enumerate_fundamental, sieve_primes
from .errors import DomainError
from .lfunc import L_direct
from .special import EULER_GAMMA, const_c20, const_c21, riemann_zeta

BLOCK = 4096
Z95 = 1.959963984540054
ZETA2 = math.pi ** 2 / 6


@dataclass(frozen=True)
class RandomEulerSpec:
    sigma: float
    y: float
    samples: int
    seed: int = 0

    def __post_init__(self):
        if not 0.5 < self.sigma <= 1:
            raise DomainError("sigma must lie in (1/2, 1]")
        if self.samples < 1:
            raise DomainError("samples must be >= 1")


@dataclass
class DensityReport:
    B: float
    empirical: float
    half_width: float
    prediction: float
    side: str
    hits: int
    total: int

    def to_dict(self) -> dict:
        return asdict(self)


def _log_factors(sigma: float, y: float):
    if y < 2:
        return np.zeros(0), np.zeros(0)
    p = sieve_primes(int(y)).primes.astype(np.float64)
    x = p ** -sigma
    return -np.log1p(-x), -np.log1p(x)      # X_p = +1, X_p = -1


def _block(seed: int, b: int, size: int, plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng([int(seed), int(b)])
    bits = rng.integers(0, 2, size=(BLOCK, plus.size), dtype=np.int8)[:size]
    return minus.sum() + bits.astype(np.float64) @ (plus - minus)


def sample_log_random_euler(spec: RandomEulerSpec, threads: int = 1) -> np.ndarray:
    """log of the random Euler product, one value per sample."""
    plus, minus = _log_factors(spec.sigma, spec.y)
    n = spec.samples
    if plus.size == 0:
        return np.zeros(n)
    nb = -(-n // BLOCK)
    sizes = [min(BLOCK, n - b * BLOCK) for b in range(nb)]
    work = lambda b: _block(spec.seed, b, sizes[b], plus, minus)
    if threads <= 1:
        parts = [work(b) for b in range(nb)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, range(nb)))
    return np.concatenate(parts)


def sample_random_euler(spec: RandomEulerSpec, threads: int = 1) -> np.ndarray:
    return np.exp(sample_log_random_euler(spec, threads))


def exact_moments(sigma: float, y: float):
    """(E[L], E[L^2]) for the truncated random Euler product."""
    if y < 2:
        return 1.0, 1.0
    p = sieve_primes(int(y)).primes.astype(np.float64)
    x = p ** -sigma
    m1 = math.exp(-np.log1p(-x * x).sum())
    m2 = math.exp(np.log(0.5 * ((1 - x) ** -2 + (1 + x) ** -2)).sum())
    return m1, m2


def truncation_shift_bound(sigma: float, y1: float, y2: float) -> float:
    """Largest change of a log-sample when the cutoff moves from y1 to y2."""
    p = sieve_primes(int(y2)).primes
    p = p[p > y1].astype(np.float64)
    x = p ** -sigma
    return float((x / (1 - x)).sum())


def mc_tail(samples: np.ndarray, B: float, side: str = "lower", prediction: float = float("nan")) -> DensityReport:
    """Fraction of samples <= B (lower) or >= B (upper) with a 95% half-width.

    With zero hits (or all hits) the half-width is the one-sided bound 3/n.
    """
    if not B > 0:
        raise DomainError("B must be positive")
    if side not in ("lower", "upper"):
        raise DomainError("side must be 'lower' or 'upper'")
    s = np.asarray(samples)
    n = int(s.size)
    if n == 0:
        raise DomainError("no samples")
    k = int(np.count_nonzero(s <= B) if side == "lower" else np.count_nonzero(s >= B))
    phat = k / n
    if k == 0 or k == n:
        hw = 3.0 / n
    else:
        hw = Z95 * math.sqrt(phat * (1 - phat) / n)
    return DensityReport(float(B), phat, hw, float(prediction), side, k, n)


def lamzouri_log_prediction(sigma: float, B: float) -> float:
    """-c20 log(|zeta(sigma)|/B)^{1/(1-sigma)} loglog(|zeta(sigma)|/B)^{sigma/(1-sigma)}."""
    if not 0.5 < sigma < 1:
        raise DomainError("need 1/2 < sigma < 1")
    if not B > 0:
        raise DomainError("B must be positive")
    lz = math.log(abs(riemann_zeta(sigma)) / B)
    if not lz > 1:
        raise DomainError("need log(|zeta(sigma)|/B) > 1")
    e = 1 / (1 - sigma)
    return -const_c20(sigma) * lz ** e * math.log(lz) ** (sigma * e)


def lamzouri_prediction(sigma: float, B: float) -> float:
    return math.exp(lamzouri_log_prediction(sigma, B))


def gs_prediction(B: float) -> float:
    """exp(-c21 exp(zeta(2)/(B e^gamma)) B e^gamma / zeta(2))."""
    if not B > 0:
        raise DomainError("B must be positive")
    u = ZETA2 / (B * math.exp(EULER_GAMMA))
    if not u > 1:
        raise DomainError("need zeta(2)/(B e^gamma) > 1")
    return math.exp(-const_c21() * math.exp(u) / u)


def _prediction(sigma: float, B: float) -> float:
    try:
        return gs_prediction(B) if sigma == 1 else lamzouri_prediction(sigma, B)
    except (DomainError, OverflowError):
        return float("nan")


def field_values(sigma: float, X: float) -> np.ndarray:
    """h_sigma over quadratic fields with |disc| <= X.

    |zeta(sigma) L(sigma, chi_d)| for sigma < 1; at sigma = 1 the residue of
    zeta is 1 and the special value is |L(1, chi_d)|.
    """
    if not 0.5 < sigma <= 1:
        raise DomainError("sigma must lie in (1/2, 1]")
    hi = int(X)
    ds = enumerate_fundamental(1, hi, -1) + [d for d in enumerate_fundamental(1, hi, 1) if d != 1]
    scale = 1.0 if sigma == 1 else abs(riemann_zeta(sigma))
    return np.array([scale * abs(L_direct(sigma, d).value) for d in sorted(ds)])


def empirical_density(sigma: float, X: float, B, side: str = "lower") -> List[DensityReport]:
    """Fraction of quadratic fields with |disc| <= X and h_sigma <= B (or >= B)."""
    if X < 100:
        raise DomainError("X must be >= 100")
    Bs: Sequence[float] = [B] if np.isscalar(B) else list(B)
    vals = field_values(sigma, X)
    return [mc_tail(vals, b, side, _prediction(sigma, b)) for b in Bs]


def random_euler_density(spec: RandomEulerSpec, Bs: Sequence[float], side: str = "lower",
                         threads: int = 1) -> List[DensityReport]:
    s = sample_random_euler(spec, threads)
    return [mc_tail(s, b, side, _prediction(spec.sigma, b)) for b in Bs]
