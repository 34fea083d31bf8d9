import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadzeta.arith import enumerate_8d_family, is_squarefree, kronecker
from quadzeta.errors import DomainError
from quadzeta.lfunc import L_direct
from quadzeta.resonator import (ResonatorSpec, bogomolov_bound, cauchy_schwarz_chain,
                                empirical_moments, moment_report, predicted_moments,
                                resonator_value, scan_min_L, titu_gate)
from quadzeta.special import const_c5


def test_resonator_trivial():
    spec = ResonatorSpec("center", 1e4, N=1)
    assert resonator_value(13, spec) == 1.0
    empty = ResonatorSpec("center", 1e6, N=50)      # L = sqrt(log 50 loglog 50) gives no primes <= 50
    assert empty.f.support_primes(50) == []
    for d in (1, 3, 5, 7, 11):
        assert resonator_value(d, empty) == 1.0


def test_resonator_right_bruteforce():
    spec = ResonatorSpec("right", 1e4, 0.75, N=30, L=2.0)
    lo = 2 ** (4 / 3)
    total = 0.0
    for l in range(1, 31):
        if not is_squarefree(l):
            continue
        ps = [p for p in range(2, l + 1) if l % p == 0 and all(p % q for q in range(2, p))]
        if any(p < lo for p in ps):
            continue
        total += (-1) ** len(ps) * math.prod(2.0 * p ** -0.75 for p in ps) * kronecker(8, l)
    assert resonator_value(1, spec) == pytest.approx(total, rel=1e-14)


def test_moment_examples():
    spec = ResonatorSpec("center", 160, N=1)
    m1, count, _ = empirical_moments(spec, 1)
    assert count == 5
    assert m1 == pytest.approx(math.fsum(L_direct(0.5, 8 * d).value for d in (11, 13, 15, 17, 19)), rel=1e-14)
    m2, _, _ = empirical_moments(spec, 2)
    assert m2 >= 0
    right = ResonatorSpec("right", 160, 0.75, N=1)
    m1r, count_r, _ = empirical_moments(right, 1)
    ds = [d for d in range(20, 51) if d % 2 and is_squarefree(d)]
    assert count_r == len(ds)
    assert m1r == pytest.approx(math.fsum(L_direct(0.75, 8 * d).value for d in ds), rel=1e-14)


def test_moment_report_fields():
    rep = moment_report(ResonatorSpec("right", 2000, 0.75, N=200, L=1.5))
    assert rep.count == len(enumerate_8d_family(2000, 1 / 8, 5 / 16))
    assert rep.ratio_sq == pytest.approx((rep.m2_emp / rep.m1_emp) ** 2)
    assert rep.flags


def test_moments_additive_over_chunks():
    spec = ResonatorSpec("right", 3000, 0.8, N=100, L=1.5)
    one = moment_report(spec, threads=1)
    many = moment_report(spec, threads=6)
    assert one.m1_emp == many.m1_emp and one.m2_emp == many.m2_emp


def test_predicted_empty_support():
    spec = ResonatorSpec("center", 1e6, N=1)
    m1, m2, flags = predicted_moments(spec)
    X = 1e6
    assert m2 / (X * math.log(X) ** 3) == pytest.approx(const_c5(), rel=1e-14)
    assert m1 == pytest.approx(X * math.log(X))
    assert any("c4" in f for f in flags)


@given(st.floats(1e-6, 0.5), st.integers(2, 10 ** 6))
def test_product_factor_order(f, p):
    assert 1 + f * f - 4 * f / math.sqrt(p) < 1 + f * f - 2 * f / math.sqrt(p)


def test_bogomolov():
    assert 0 < bogomolov_bound(0.5, math.exp(math.e)) < 1
    vals = [bogomolov_bound(0.5, X) for X in (1e4, 1e6, 1e8)]
    assert vals[0] > vals[1] > vals[2]
    l = math.log(1e6)
    assert bogomolov_bound(0.75, 1e6) == pytest.approx(math.exp(-3 * l ** (1 / 6) / math.log(l)), rel=1e-14)
    with pytest.raises(DomainError):
        bogomolov_bound(1.0, 1e4)


def test_scan_small():
    res = scan_min_L(0.5, 160)
    vals = {d: abs(L_direct(0.5, 8 * d).value) for d in (11, 13, 15, 17, 19)}
    assert [e[0] for e in res.entries] == sorted(vals, key=vals.get)
    assert res.entries[0][1] == pytest.approx(min(vals.values()), rel=1e-15)
    assert all(v > 0 for _, v, _ in res.entries)
    assert res.disc_window == (80.0, 160.0)


def test_scan_threads_identical():
    a = scan_min_L(0.75, 3000, threads=1).to_dict()
    b = scan_min_L(0.75, 3000, threads=8).to_dict()
    assert a == b


def test_titu_examples():
    assert titu_gate([3.0], [2.0])[0] == titu_gate([3.0], [2.0])[1]
    assert titu_gate([1, 1], [1, 1]) == (2.0, 2.0)
    rng = np.random.default_rng(0)
    lhs, rhs = titu_gate(rng.normal(size=100), rng.uniform(0.1, 2, size=100))
    assert lhs >= rhs
    with pytest.raises(DomainError):
        titu_gate([1.0], [0.0])


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3)), min_size=1, max_size=50))
def test_titu_property(pairs):
    a, b = zip(*pairs)
    lhs, rhs = titu_gate(a, b)
    assert lhs >= rhs * (1 - 1e-12) - 1e-9


@pytest.mark.parametrize("X,regime,sigma", [(160, "center", 0.5), (1600, "center", 0.5),
                                            (1600, "right", 0.75)])
def test_cauchy_schwarz_chain(X, regime, sigma):
    lhs, rhs = cauchy_schwarz_chain(ResonatorSpec(regime, X, sigma, N=1))
    assert lhs >= rhs


def test_spec_validation():
    with pytest.raises(DomainError):
        ResonatorSpec("center", 100, 0.6)
    with pytest.raises(DomainError):
        ResonatorSpec("right", 100, 1.0)
    with pytest.raises(DomainError):
        ResonatorSpec("center", 100, N=0)
