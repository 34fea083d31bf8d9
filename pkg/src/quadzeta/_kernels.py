"""Hot numerical kernels with a numba path and a pure-numpy fallback.

Set ``QUADZETA_DISABLE_NUMBA=1`` in the environment to force the numpy
implementations.  Both variants of every kernel stay importable under
``*_nb`` / ``*_np`` names so they can be compared directly.
"""

import math
import os

import numpy as np

_DISABLE = os.environ.get("QUADZETA_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError("numba disabled by environment")
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn
        return wrap

BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


def _bernoulli_ratios(J: int) -> np.ndarray:
    """B_{2j}/(2j)! for j = 0..J+1 (index 0 unused)."""
    from scipy.special import bernoulli
    B = bernoulli(2 * J + 2)
    out = np.zeros(J + 2)
    for j in range(1, J + 2):
        out[j] = B[2 * j] / math.factorial(2 * j)
    return out


# ---------------------------------------------------------------------------
# Kronecker symbol tables
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _kron_scalar(a, n):
    if n == 0:
        return 1 if (a == 1 or a == -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    while n % 2 == 0:
        if a % 2 == 0:
            return 0
        n //= 2
        r8 = a % 8
        if r8 == 3 or r8 == 5:
            t = -t
    a = a % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r8 = n % 8
            if r8 == 3 or r8 == 5:
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a = a % n
    return t if n == 1 else 0


@njit(cache=True, nogil=True)
def kronecker_table_nb(d, m):
    out = np.empty(m, dtype=np.int8)
    for k in range(m):
        out[k] = _kron_scalar(d, k)
    return out


def kronecker_table_np(d: int, m: int) -> np.ndarray:
    """chi_d(k) for k = 0..m-1, vectorised Jacobi reduction."""
    n = np.arange(m, dtype=np.int64)
    res = np.ones(m, dtype=np.int64)
    if m == 0:
        return res.astype(np.int8)
    res[0] = 1 if abs(d) == 1 else 0
    n[0] = 1
    d_even = d % 2 == 0
    flip2 = (d % 8) in (3, 5)
    ev = (n % 2 == 0)
    while ev.any():
        if d_even:
            res[ev] = 0
        elif flip2:
            res[ev] = -res[ev]
        n[ev] //= 2
        ev = (n % 2 == 0)
    a = np.mod(d, n)
    act = (a != 0)
    while act.any():
        ev = act & (a % 2 == 0)
        while ev.any():
            a[ev] //= 2
            r8 = n % 8
            res[ev & ((r8 == 3) | (r8 == 5))] *= -1
            ev = act & (a % 2 == 0)
        a2 = np.where(act, n, a)
        n2 = np.where(act, a, n)
        a, n = a2, n2
        res[act & (a % 4 == 3) & (n % 4 == 3)] *= -1
        a = np.where(act, a % n, a)
        act = (a != 0)
    res[n != 1] = 0
    if m > 0 and abs(d) == 1:
        res[0] = 1
    return res.astype(np.int8)


# ---------------------------------------------------------------------------
# Dirichlet series over full character periods with Euler-Maclaurin tail
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def l_series_em_nb(chi, sigma, K, bern):
    q = chi.shape[0]
    J = bern.shape[0] - 2
    # direct part, Neumaier summation
    s = 0.0
    comp = 0.0
    absum = 0.0
    for n in range(1, K * q + 1):
        c = chi[n % q]
        if c == 0:
            continue
        t = c * math.exp(-sigma * math.log(n))
        absum += abs(t)
        tt = s + t
        if abs(s) >= abs(t):
            comp += (s - tt) + t
        else:
            comp += (t - tt) + s
        s = tt
    direct = s + comp
    tail = 0.0
    err = 0.0
    for a in range(1, q + 1):
        c = chi[a % q]
        if c == 0:
            continue
        x = K + a / q
        lx = math.log(x)
        u = (1.0 - sigma) * lx
        if abs(u) < 1e-8:
            phi = 1.0 + 0.5 * u
        else:
            phi = math.expm1(u) / u
        em = -lx * phi
        xs = math.exp(-sigma * lx)
        em += 0.5 * xs
        poch = sigma
        pw = xs / x
        for j in range(1, J + 1):
            em += bern[j] * poch * pw
            poch *= (sigma + 2 * j - 1) * (sigma + 2 * j)
            pw /= x * x
        tail += c * em
        err += abs(bern[J + 1] * poch * pw)
    qs = math.exp(-sigma * math.log(q))
    return direct + qs * tail, qs * err, absum


def l_series_em_np(chi, s, K, bern):
    """Numpy twin of :func:`l_series_em_nb`; ``s`` may be complex."""
    q = chi.shape[0]
    J = bern.shape[0] - 2
    cplx = isinstance(s, complex) or np.iscomplexobj(s)
    dt = np.complex128 if cplx else np.float64
    direct = dt(0)
    absum = 0.0
    chunk = 1 << 20
    N = K * q
    for lo in range(1, N + 1, chunk):
        n = np.arange(lo, min(N, lo + chunk - 1) + 1, dtype=np.float64)
        c = chi[(n.astype(np.int64)) % q].astype(np.float64)
        t = c * np.exp(-s * np.log(n))
        direct += math.fsum(t.real) + (1j * math.fsum(t.imag) if cplx else 0.0)
        absum += float(np.abs(t).sum())
    a = np.arange(1, q + 1)
    c = chi[a % q].astype(np.float64)
    keep = c != 0
    a, c = a[keep], c[keep]
    x = K + a / q
    lx = np.log(x)
    u = (1.0 - s) * lx
    small = np.abs(u) < 1e-8
    usafe = np.where(small, 1.0, u)
    phi = np.where(small, 1.0 + 0.5 * u, np.expm1(usafe) / usafe)
    em = -lx * phi
    xs = np.exp(-s * lx)
    em = em + 0.5 * xs
    poch = s
    pw = xs / x
    for j in range(1, J + 1):
        em = em + bern[j] * poch * pw
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
        pw = pw / (x * x)
    nxt = np.abs(bern[J + 1] * poch * pw)
    sre = s.real if cplx else s
    corr = abs(s + 2 * J + 1) / (sre + 2 * J + 1) if sre + 2 * J + 1 > 0 else 1.0
    qs = np.exp(-s * np.log(q))
    tail = np.sum(c * em)
    err = float(np.sum(nxt)) * abs(qs) * corr
    return direct + qs * tail, err, absum


# ---------------------------------------------------------------------------
# Contour quadrature for the smoothing weight
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def w2_sum_nb(lnxi, Gr, Gi, c, h):
    m = lnxi.shape[0]
    K = Gr.shape[0]
    out = np.empty(m)
    for i in range(m):
        th = h * lnxi[i]
        cr = 1.0
        ci = 0.0
        wr = math.cos(th)
        wi = -math.sin(th)
        acc = 0.0
        for k in range(K):
            if k % 64 == 0:
                cr = math.cos(k * th)
                ci = -math.sin(k * th)
            acc += Gr[k] * cr - Gi[k] * ci
            tr = cr * wr - ci * wi
            ci = cr * wi + ci * wr
            cr = tr
        out[i] = acc * h / math.pi * math.exp(-c * lnxi[i])
    return out


def w2_sum_np(lnxi, Gr, Gi, c, h):
    G = Gr + 1j * Gi
    k = np.arange(G.shape[0]) * h
    out = np.empty(lnxi.shape[0])
    step = max(1, (1 << 22) // max(1, G.shape[0]))
    for lo in range(0, lnxi.shape[0], step):
        ln = lnxi[lo:lo + step]
        ph = np.exp(-1j * np.outer(ln, k))
        out[lo:lo + step] = (ph @ G).real * h / math.pi * np.exp(-c * ln)
    return out


# ---------------------------------------------------------------------------
# Exponentially damped character sums
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def twisted_sum_nb(chi, sigma, Y, nmax):
    q = chi.shape[0]
    s = 0.0
    comp = 0.0
    for n in range(1, nmax + 1):
        c = chi[n % q]
        if c == 0:
            continue
        t = c * math.exp(-sigma * math.log(n) - n / Y)
        tt = s + t
        if abs(s) >= abs(t):
            comp += (s - tt) + t
        else:
            comp += (t - tt) + s
        s = tt
    return s + comp


def twisted_sum_np(chi, sigma, Y, nmax):
    q = chi.shape[0]
    parts = []
    chunk = 1 << 21
    for lo in range(1, nmax + 1, chunk):
        n = np.arange(lo, min(nmax, lo + chunk - 1) + 1)
        c = chi[n % q].astype(np.float64)
        nf = n.astype(np.float64)
        parts.append(math.fsum(c * np.exp(-sigma * np.log(nf) - nf / Y)))
    return math.fsum(parts)


if NUMBA_AVAILABLE:
    kronecker_table = kronecker_table_nb
    w2_sum = w2_sum_nb
    twisted_sum = twisted_sum_nb

    def l_series_em(chi, s, K, bern):
        if isinstance(s, complex):
            return l_series_em_np(chi, s, K, bern)
        return l_series_em_nb(chi, float(s), int(K), bern)
else:
    kronecker_table = kronecker_table_np
    w2_sum = w2_sum_np
    twisted_sum = twisted_sum_np
    l_series_em = l_series_em_np
