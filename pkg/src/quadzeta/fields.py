"""Number fields built to control Dedekind zeta values.

Two constructions: a degree-d polynomial that is irreducible modulo each
of the first n primes (those primes are inert), and multiquadratic fields
Q(sqrt q_1, ..., sqrt q_k) in which the first n primes split completely.
Plus Dedekind zeta of quadratic fields left of the critical strip via the
functional equation, and the Northcott-type enumeration it enables.

Polynomials over F_p are lists of ints, constant term first.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import exp1

from .arith import crt, enumerate_fundamental, is_fundamental, is_prime, kronecker, sieve_primes
from .errors import ConvergenceError, DomainError
from .lfunc import L_direct
from .special import _zeta_em, gamma_C_ratio, gamma_R_ratio, gamma_m, riemann_zeta

MAX_K = 6
MAX_N = 8


# ---------------------------------------------------------------------------
# F_p[x] arithmetic
# ---------------------------------------------------------------------------

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], p: int) -> List[int]:
    return _trim([int(c) % p for c in a])


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, p)


def _divmod(a, b, p):
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _trim(a)
    return _trim(q), a


def _mod(a, b, p):
    return _divmod(a, b, p)[1]


def _gcd(a, b, p):
    a, b = _pmod(a, p), _pmod(b, p)
    while b:
        a, b = b, _mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _powmod(base, e, f, p):
    result = [1]
    base = _mod(base, f, p)
    while e:
        if e & 1:
            result = _mod(_mul(result, base, p), f, p)
        base = _mod(_mul(base, base, p), f, p)
        e >>= 1
    return result


def _deriv(a, p):
    return _trim([(i * a[i]) % p for i in range(1, len(a))])


def _prime_divisors(n: int) -> List[int]:
    out, m, q = [], n, 2
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = _pmod(f, p)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _powmod(x, p ** d, f, p) != _mod(x, f, p):
        return False
    for q in _prime_divisors(d):
        h = _sub(_powmod(x, p ** (d // q), f, p), x, p)
        if len(_gcd(f, h, p)) > 1:
            return False
    return True


def irreducible_poly_mod_p(d: int, p: int, seed: int = 0) -> List[int]:
    """A seeded random monic irreducible polynomial of degree d over F_p."""
    if d < 1:
        raise DomainError("degree must be >= 1")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    rng = np.random.default_rng([int(seed), d, p])
    for _ in range(100 * d):
        f = [int(c) for c in rng.integers(0, p, size=d)] + [1]
        if is_irreducible_mod_p(f, p):
            return f
    raise ConvergenceError("no irreducible polynomial found within the attempt budget")


def factor_degrees_mod_p(f: Sequence[int], p: int) -> Optional[List[int]]:
    """Degrees of the irreducible factors of f mod p, or None if f mod p is not squarefree."""
    f = _pmod(f, p)
    if len(f) < 2:
        return []
    if len(_gcd(f, _deriv(f, p), p)) > 1 or not _deriv(f, p):
        return None
    degs: List[int] = []
    x = [0, 1]
    h = x
    i = 1
    while len(f) - 1 >= 2 * i:
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, x, p), p)
        if len(g) > 1:
            degs += [i] * ((len(g) - 1) // i)
            f = _divmod(f, g, p)[0]
            h = _mod(h, f, p)
        i += 1
    if len(f) > 1:
        degs.append(len(f) - 1)
    return sorted(degs)


# ---------------------------------------------------------------------------
# Field specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InertFieldSpec:
    degree: int
    n: int
    coefficients: Tuple[int, ...]       # constant term first, monic
    inert_primes: Tuple[int, ...]
    betas: Tuple[Tuple[int, ...], ...] = ()

    def to_dict(self) -> dict:
        return {"type": "inert", "degree": self.degree, "coefficients": list(self.coefficients),
                "inert_primes": list(self.inert_primes)}


@dataclass(frozen=True)
class MultiquadraticSpec:
    k: int
    n: int
    q_list: Tuple[int, ...]
    modulus: int

    @property
    def degree(self) -> int:
        return 2 ** self.k

    def to_dict(self) -> dict:
        return {"type": "multiquadratic", "k": self.k, "n": self.n,
                "q_list": list(self.q_list), "modulus": self.modulus}


@dataclass(frozen=True)
class SplittingProfile:
    p: int
    e: int
    f: int
    g: int
    degrees: Tuple[int, ...] = ()
    flagged: bool = False      # p | disc(psi): only interval information


def first_primes(n: int) -> List[int]:
    out, c = [], 2
    while len(out) < n:
        if is_prime(c):
            out.append(c)
        c += 1
    return out


def build_inert_polynomial(d: int, n: int, seed: int = 0,
                           betas: Optional[Sequence[Sequence[int]]] = None) -> InertFieldSpec:
    """Monic psi with psi = beta_j mod p_j (beta_j irreducible of degree d), CRT coefficient-wise."""
    if d < 1 or n < 1:
        raise DomainError("need d >= 1 and n >= 1")
    if n > 64:
        raise DomainError("n above 64 is outside the supported range")
    ps = first_primes(n)
    if betas is None:
        betas = [irreducible_poly_mod_p(d, p, seed) for p in ps]
    if len(betas) != n:
        raise DomainError("need one beta per prime")
    for b, p in zip(betas, ps):
        if len(b) != d + 1 or b[-1] % p != 1 or not is_irreducible_mod_p(b, p):
            raise DomainError(f"beta {b} is not monic irreducible of degree {d} mod {p}")
    coeffs = []
    for i in range(d + 1):
        c, _ = crt([b[i] % p for b, p in zip(betas, ps)], ps)
        coeffs.append(c)
    coeffs[-1] = 1
    spec = InertFieldSpec(d, n, tuple(coeffs), tuple(ps), tuple(tuple(int(c) for c in b) for b in betas))
    for p in ps:
        if factor_degrees_mod_p(coeffs, p) != [d] and d > 1:
            raise ConvergenceError("construction replay failed")
    return spec


def splitting_from_polynomial(spec: InertFieldSpec, p: int) -> SplittingProfile:
    degs = factor_degrees_mod_p(spec.coefficients, p)
    if degs is None:
        return SplittingProfile(p, 0, 0, 0, (), True)
    f = degs[0] if len(set(degs)) == 1 else 0
    return SplittingProfile(p, 1, f, len(degs), tuple(degs), False)


def find_split_primes(k: int, n: int, budget: int = 10 ** 7) -> MultiquadraticSpec:
    """The k smallest primes q = 1 mod 4 p_1 ... p_n."""
    if k < 1 or n < 0:
        raise DomainError("need k >= 1 and n >= 0")
    if k > MAX_K or n > MAX_N:
        raise DomainError(f"desk limits are k <= {MAX_K}, n <= {MAX_N}")
    M = 4 * math.prod(first_primes(n))
    out = []
    t = 1
    while len(out) < k:
        if t > budget:
            raise ConvergenceError("split-prime search budget exceeded")
        q = t * M + 1
        if is_prime(q):
            out.append(q)
        t += 1
    return MultiquadraticSpec(k, n, tuple(out), M)


def multiquadratic_splitting(spec: MultiquadraticSpec, p: int) -> SplittingProfile:
    ram = [q for q in spec.q_list if q == p]
    others = [q for q in spec.q_list if q != p]
    v = [kronecker(q, p) for q in others]
    f = 1 if all(x == 1 for x in v) else 2
    e = 2 if ram else 1
    g = spec.degree // (e * f)
    return SplittingProfile(p, e, f, g, tuple([f] * g), False)


# ---------------------------------------------------------------------------
# Dedekind zeta right of 1
# ---------------------------------------------------------------------------

@dataclass
class FieldZetaReport:
    sigma: float
    P: int
    value: float
    error: float
    log_gap: float
    log_gap_error: float
    target_bound: float
    within_bound: bool
    flagged_primes: List[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _target_bound(deg_plus: float, sigma: float, n: int) -> float:
    if n <= 1:
        return math.inf      # log n = 0
    return deg_plus / ((sigma - 1) * n ** (sigma - 1) * math.log(n))


def zeta_field_sigma(spec, sigma: float, P: int = 20000) -> FieldZetaReport:
    """Euler product of zeta_F(sigma) and the comparison with its target.

    Target is zeta(d sigma) for inert specs and zeta(sigma)^{2^k} for
    multiquadratic ones.  Primes dividing disc(psi) outside the guaranteed
    set contribute an interval [1, (1-p^{-sigma})^{-d}].
    """
    if not sigma > 1:
        raise DomainError("need sigma > 1")
    inert = isinstance(spec, InertFieldSpec)
    if inert:
        d = spec.degree
        if P < max(spec.inert_primes):
            raise DomainError("cutoff must cover the guaranteed primes")
    elif isinstance(spec, MultiquadraticSpec):
        d = spec.degree
    else:
        raise DomainError("unsupported field spec")
    logs, tgt, flagged = [], [], []
    slack = 0.0
    for p in sieve_primes(P).primes.tolist():
        if inert:
            prof = splitting_from_polynomial(spec, p)
        else:
            prof = multiquadratic_splitting(spec, p)
        if prof.flagged:
            hi = -d * math.log1p(-p ** -sigma)
            logs.append(0.5 * hi)
            slack += 0.5 * hi
            flagged.append(p)
        else:
            logs.append(-math.fsum(math.log1p(-p ** (-fi * sigma)) for fi in prof.degrees))
        if inert:
            tgt.append(-math.log1p(-p ** (-d * sigma)))
        else:
            tgt.append(-d * math.log1p(-p ** -sigma))
    # tail: the average prime contributes p^{-sigma}; rigorous envelope (d+1) sum 1/(p^sigma - 1)
    L = math.log(P)
    est = exp1((sigma - 1) * L)
    tail_bound = (d + 1) / (1 - P ** -sigma) * P ** (1 - sigma) / (sigma - 1)
    est = float(est)
    logF = math.fsum(logs) + est
    logT = math.fsum(tgt) + (d * est if not inert else 0.0)
    gap = float(logF - logT)
    err = slack + tail_bound
    bound = _target_bound(d + 1, sigma, spec.n)
    return FieldZetaReport(sigma, P, math.exp(logF), math.exp(logF) * math.expm1(err),
                           gap, err, bound, bool(abs(gap) - err <= bound), flagged)


# ---------------------------------------------------------------------------
# Quadratic fields left of the critical strip
# ---------------------------------------------------------------------------

@dataclass
class NegLineReport:
    s: complex
    d: int
    zeta_value: complex
    direct_value: complex
    roundtrip_diff: float
    northcott_lower: float
    bound_holds: bool
    zero_order: int = 0
    zero_proximity: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("s", "zeta_value", "direct_value"):
            z = complex(out[key])
            out[key] = {"re": z.real, "im": z.imag}
        return out


def _cauchy_derivative(fn, s0: complex, r: float = 0.1, M: int = 32) -> complex:
    acc = 0j
    for m in range(M):
        u = np.exp(2j * math.pi * (m + 0.5) / M)
        acc += complex(fn(s0 + r * u)) / u
    return acc / (M * r)


def _zeta_K_direct(s: complex, d: int) -> complex:
    # Euler-Maclaurin continuation of both factors, no functional equation
    s = complex(s)
    N = max(50, int(abs(s.imag)) + 10, int(abs(s)) + 10)
    return _zeta_em(s, N) * complex(L_direct(s, d).value)


def _zeta_K_fe(s: complex, d: int) -> complex:
    s = complex(s)
    far = complex(riemann_zeta(1 - s)) * complex(L_direct(1 - s, d).value)
    if d > 0:
        g = gamma_R_ratio(s) ** 2
    else:
        g = gamma_C_ratio(s)
    return complex(far * g * np.exp((0.5 - s) * math.log(abs(d))))


def northcott_lower(s: complex, d: int) -> float:
    s = complex(s)
    return float((gamma_m(s) / abs(riemann_zeta(1 - s.real))) ** 2 * abs(d) ** (0.5 - s.real))


def zeta_neg_line(s, d: int) -> NegLineReport:
    """zeta_{Q(sqrt d)}(s) for Re(s) < 0 via the functional equation.

    At negative integers the first nonvanishing Taylor coefficient is
    returned: zeta vanishes at negative even integers, L(s, chi_d) at
    negative even integers for d > 0 and at negative odd integers for d < 0.
    """
    s = complex(s)
    if not s.real < 0:
        raise DomainError("need Re(s) < 0")
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    lower = northcott_lower(s, d)
    if s.imag == 0 and float(s.real).is_integer():
        n = int(-s.real)
        z0 = n % 2 == 0
        l0 = (n % 2 == 0) if d > 0 else (n % 2 == 1)
        zf = (lambda t: riemann_zeta(complex(t)))
        lf = (lambda t: L_direct(complex(t), d).value)
        zv = _cauchy_derivative(zf, s) if z0 else complex(zf(s))
        lv = _cauchy_derivative(lf, s) if l0 else complex(lf(s))
        val = complex(zv * lv).real
        order = int(z0) + int(l0)
        return NegLineReport(s, d, val, val, 0.0, lower, bool(abs(val) >= lower), order, False)
    fe = _zeta_K_fe(s, d)
    direct = _zeta_K_direct(s, d)
    nearest = round(s.real)
    prox = bool(abs(s - nearest) < 1e-6 and nearest < 0)
    diff = float(abs(fe - direct))
    if s.imag == 0:
        fe, direct = fe.real, direct.real
    return NegLineReport(s, d, fe, direct, diff, lower,
                         bool(abs(fe) >= lower * (1 - 1e-9)), 0, prox)


@dataclass
class NorthcottResult:
    s: complex
    B: float
    delta_cutoff: float
    discriminants: List[int]
    values: List[float]

    def to_dict(self) -> dict:
        return {"s": {"re": self.s.real, "im": self.s.imag}, "B": self.B,
                "delta_cutoff": self.delta_cutoff,
                "discriminants": self.discriminants, "abs_values": self.values}


def northcott_enumerate(s, B: float, degree_bound: int = 2, max_cutoff: float = 5e6) -> NorthcottResult:
    """All quadratic fields with |zeta_K(s)| <= B, found below the discriminant cutoff."""
    s = complex(s)
    if degree_bound != 2:
        raise DomainError("only quadratic fields are supported")
    if not s.real < 0:
        raise DomainError("need Re(s) < 0")
    if s.imag == 0 and float(s.real).is_integer():
        raise DomainError("s must not be a negative integer")
    if not B > 0:
        raise DomainError("B must be positive")
    c = (gamma_m(s) / abs(riemann_zeta(1 - s.real))) ** 2
    cutoff = (B / c) ** (1.0 / (0.5 - s.real))
    if cutoff > max_cutoff:
        raise ConvergenceError(f"discriminant cutoff {cutoff:.3g} exceeds the search budget")
    hi = int(math.floor(cutoff))
    out, vals = [], []
    for d in sorted(enumerate_fundamental(1, hi, -1) + enumerate_fundamental(1, hi, 1), key=lambda x: (abs(x), x)):
        v = float(abs(_zeta_K_fe(s, d)))
        if v <= B:
            out.append(d)
            vals.append(v)
    return NorthcottResult(s, float(B), cutoff, out, vals)
