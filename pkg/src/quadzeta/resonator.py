"""Resonators, resonated moments and minimum-value scans over the 8d family."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .arith import (CompletelyMultiplicativeF, chi_table, enumerate_8d_family, sieve_primes,
                    spf_sieve)
from .errors import DomainError
from .lfunc import L_direct
from .special import const_c5

CENTER_WINDOW = (1 / 16, 1 / 8)
RIGHT_WINDOW = (1 / 8, 5 / 16)


@dataclass(frozen=True)
class ResonatorSpec:
    """Resonator parameters.

    Defaults: center N = floor(X^{0.049}), L = sqrt(log N loglog N) (1 when
    N < 16, which leaves f with empty support); right N = X, L = sqrt(log X).
    """
    regime: str
    X: float
    sigma: float = 0.5
    N: Optional[int] = None
    L: Optional[float] = None
    upper: Optional[float] = None

    def __post_init__(self):
        if self.regime not in ("center", "right"):
            raise DomainError(f"unknown regime {self.regime!r}")
        if self.regime == "center" and self.sigma != 0.5:
            raise DomainError("center regime is sigma = 1/2")
        if self.regime == "right" and not 0.5 < self.sigma < 1:
            raise DomainError("right regime needs 1/2 < sigma < 1")
        if self.X < 1:
            raise DomainError("X must be >= 1")
        if self.N is not None and self.N < 1:
            raise DomainError("N must be >= 1")
        if self.L is not None and not self.L > 0:
            raise DomainError("L must be positive")

    @property
    def n_trunc(self) -> int:
        if self.N is not None:
            return int(self.N)
        if self.regime == "center":
            return max(1, int(math.floor(self.X ** 0.049)))
        return max(1, int(self.X))

    @property
    def l_param(self) -> float:
        if self.L is not None:
            return float(self.L)
        if self.regime == "center":
            N = self.n_trunc
            if N < 16:
                return 1.0
            return math.sqrt(math.log(N) * math.log(math.log(N)))
        return math.sqrt(math.log(self.X)) if self.X > 1 else 1.0

    @property
    def f(self) -> CompletelyMultiplicativeF:
        return CompletelyMultiplicativeF(self.regime, self.l_param, self.sigma, self.upper)

    @property
    def window(self) -> Tuple[float, float]:
        lo, hi = CENTER_WINDOW if self.regime == "center" else RIGHT_WINDOW
        return lo * self.X, hi * self.X

    def family(self) -> List[int]:
        lo, hi = CENTER_WINDOW if self.regime == "center" else RIGHT_WINDOW
        return enumerate_8d_family(self.X, lo, hi)


def resonator_coeffs(spec: ResonatorSpec) -> np.ndarray:
    """r(l) = mu(l) f(l) for l = 0..N (r(0) = 0)."""
    N = spec.n_trunc
    f = spec.f
    r = np.zeros(N + 1)
    r[1] = 1.0
    if N < 2:
        return r
    spf = spf_sieve(N)
    ps = sieve_primes(N).primes
    fp = dict(zip(ps.tolist(), f.at_primes(ps).tolist()))
    for n in range(2, N + 1):
        p = int(spf[n])
        m = n // p
        if m % p == 0 or r[m] == 0.0 or fp[p] == 0.0:
            continue
        r[n] = -fp[p] * r[m]
    return r


def _resonator_with(r: np.ndarray, d: int) -> float:
    if r.shape[0] <= 2:
        return 1.0
    D = 8 * d
    idx = np.nonzero(r)[0]
    chi = chi_table(D, D)[idx % D].astype(np.float64)
    return math.fsum(r[idx] * chi)


def resonator_value(d: int, spec: ResonatorSpec) -> float:
    """R(8d) = sum_{l <= N} mu(l) f(l) chi_{8d}(l)."""
    return _resonator_with(resonator_coeffs(spec), d)


@dataclass
class MomentReport:
    m1_emp: float
    m2_emp: float
    m1_pred: float
    m2_pred: float
    ratio_sq: Optional[float]
    bogomolov_bound: float
    window: Tuple[float, float]
    count: int
    indeterminate: int = 0
    flags: List[str] = field(default_factory=list)
    regime: str = "center"
    sigma: float = 0.5
    X: float = 0.0
    N: int = 1
    L: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)


def _window_values(spec: ResonatorSpec, ds: Sequence[int], r: np.ndarray):
    out = []
    for d in ds:
        res = L_direct(spec.sigma, 8 * d)
        out.append((d, _resonator_with(r, d), res.value, res.error_estimate))
    return out


def _chunks(seq: Sequence[int], k: int) -> List[Sequence[int]]:
    k = max(1, min(k, len(seq)))
    size = math.ceil(len(seq) / k) if seq else 0
    return [seq[i:i + size] for i in range(0, len(seq), size)] if seq else []


def _collect(spec: ResonatorSpec, threads: int = 1):
    ds = spec.family()
    if not ds:
        raise DomainError("window family is empty")
    r = resonator_coeffs(spec)
    parts = _chunks(ds, 4 * max(1, threads))
    if threads <= 1:
        res = [_window_values(spec, p, r) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(lambda p: _window_values(spec, p, r), parts))
    return [row for part in res for row in part]


def empirical_moments(spec: ResonatorSpec, which_power: int, threads: int = 1) -> Tuple[float, int, int]:
    """(sum mu(2d)^2 R(8d)^2 L(sigma, chi_{8d})^power, count, #sign-indeterminate)."""
    if which_power not in (1, 2):
        raise DomainError("which_power must be 1 or 2")
    rows = _collect(spec, threads)
    vals = [R * R * L ** which_power for _, R, L, _ in rows]
    indet = sum(1 for _, _, L, e in rows if abs(L) <= e)
    return math.fsum(vals), len(rows), indet


def bogomolov_bound(sigma: float, X: float, slack: float = 1.0) -> float:
    """Size of the small L-value guaranteed at scale X."""
    if not 0.5 <= sigma < 1:
        raise DomainError("sigma must lie in [1/2, 1)")
    if X < 3:
        raise DomainError("X must be >= 3")
    lX = math.log(X)
    llX = math.log(lX)
    if llX <= 0:
        raise DomainError("need log log X > 0")
    if sigma == 0.5:
        return math.exp(-slack / math.sqrt(5) * math.sqrt(lX / llX))
    return math.exp(-slack * 4 * sigma * lX ** ((1 - sigma) / (2 * sigma)) / llX)


def predicted_moments(spec: ResonatorSpec) -> Tuple[float, float, List[str]]:
    """Main-term predictions; unknown absolute constants are flagged."""
    from .analytic import predicted_product
    X = float(spec.X)
    f = spec.f
    cutoff = spec.n_trunc
    if spec.regime == "center":
        p1 = predicted_product("m1_center", f, cutoff=cutoff)
        p2 = predicted_product("m2_center", f, cutoff=cutoff)
        m1 = X * math.log(X) * p1
        m2 = const_c5() * X * math.log(X) ** 3 * p2
        return m1, m2, ["m1_pred up to the unspecified constant c4"]
    p1 = predicted_product("m1_right", f, cutoff=cutoff)
    p2 = predicted_product("m2_right", f, cutoff=cutoff)
    return X * p1, X * p2, ["m1_pred up to constant c14", "m2_pred up to constant c16"]


def moment_report(spec: ResonatorSpec, threads: int = 1) -> MomentReport:
    rows = _collect(spec, threads)
    m1 = math.fsum(R * R * L for _, R, L, _ in rows)
    m2 = math.fsum(R * R * L * L for _, R, L, _ in rows)
    indet = sum(1 for _, _, L, e in rows if abs(L) <= e)
    p1, p2, flags = predicted_moments(spec)
    X = spec.X
    bb = bogomolov_bound(spec.sigma, X) if X >= 16 else float("nan")
    return MomentReport(m1, m2, p1, p2, (m2 / m1) ** 2 if m1 != 0 else None, bb,
                        spec.window, len(rows), indet, flags, spec.regime, spec.sigma,
                        float(X), spec.n_trunc, spec.l_param)


def cauchy_schwarz_chain(spec: ResonatorSpec) -> Tuple[float, float]:
    """(sum of R^2 over members with L != 0, M1^2/M2)."""
    rows = _collect(spec)
    lhs = math.fsum(R * R for _, R, L, _ in rows if L != 0)
    m1 = math.fsum(R * R * L for _, R, L, _ in rows)
    m2 = math.fsum(R * R * L * L for _, R, L, _ in rows)
    return lhs, (m1 * m1 / m2 if m2 > 0 else 0.0)


def titu_gate(numerators: Sequence[float], denominators: Sequence[float]) -> Tuple[float, float]:
    """(sum a_i^2/b_i, (sum a_i)^2/sum b_i); the first is always >= the second."""
    a = np.asarray(numerators, dtype=np.float64)
    b = np.asarray(denominators, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise DomainError("need two nonempty sequences of equal length")
    if (b <= 0).any():
        raise DomainError("denominators must be positive")
    return math.fsum(a * a / b), math.fsum(a) ** 2 / math.fsum(b)


@dataclass
class ScanResult:
    sigma: float
    X: float
    d_window: Tuple[float, float]
    disc_window: Tuple[float, float]
    scanned: int
    entries: List[Tuple[int, float, bool]]
    indeterminate: List[Tuple[int, float, float]]

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma, "X": self.X,
            "d_window": list(self.d_window), "disc_window": list(self.disc_window),
            "scanned": self.scanned,
            "entries": [{"d": d, "abs_L": v, "sign_certain": c} for d, v, c in self.entries],
            "indeterminate": [{"d": d, "abs_L": v, "error": e} for d, v, e in self.indeterminate],
        }


def scan_min_L(sigma: float, X: float, threads: int = 1, top: int = 10) -> ScanResult:
    """Smallest |L(sigma, chi_{8d})| over the window family.

    sigma = 1/2 uses d in [X/16, X/8], otherwise d in [X/8, 5X/16].
    Values within their own error estimate of 0 go to ``indeterminate``.
    """
    if not 0.5 <= sigma <= 1:
        raise DomainError("sigma must lie in [1/2, 1]")
    if sigma == 0.5:
        spec = ResonatorSpec("center", X, 0.5, N=1)
    else:
        spec = ResonatorSpec("right", X, min(sigma, 0.999), N=1)
    ds = spec.family()
    if not ds:
        raise DomainError("window family is empty")

    def work(chunk):
        out = []
        for d in chunk:
            r = L_direct(sigma, 8 * d)
            out.append((d, r.value, r.error_estimate))
        return out

    parts = _chunks(ds, 4 * max(1, threads))
    if threads <= 1:
        res = [work(p) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(work, parts))
    rows = [row for part in res for row in part]
    certain = sorted(((d, abs(v), True) for d, v, e in rows if abs(v) > e), key=lambda t: (t[1], t[0]))
    indet = [(d, abs(v), e) for d, v, e in rows if abs(v) <= e]
    lo, hi = spec.window
    return ScanResult(sigma, float(X), (lo, hi), (8 * lo, 8 * hi), len(rows), certain[:top], indet)
