import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hamburger.dirichlet_algebra import (
    DirichletPolynomial,
    GeneralDirichletSeries,
    OrdinaryDirichletSeries as ODS,
    SupportRefuted,
    abscissa_estimate,
    convolve,
    detect_support,
    divide,
    divisors,
    dumps_coefficients,
    evaluate,
    loads_coefficients,
    ods_to_gds,
)
from hamburger.errors import DivisionUndefinedError, InsufficientDataError, TruncationError


def sieve_mobius(n):
    mu = [1] * (n + 1)
    is_comp = [False] * (n + 1)
    for p in range(2, n + 1):
        if not is_comp[p]:
            for m in range(p, n + 1, p):
                is_comp[m] = m != p or is_comp[m]
                mu[m] = -mu[m]
            for m in range(p * p, n + 1, p * p):
                mu[m] = 0
    return mu[1:]


def brute_convolve(a, b):
    n = len(a)
    return [sum(a[d - 1] * b[m // d - 1] for d in range(1, m + 1) if m % d == 0)
            for m in range(1, n + 1)]


def test_delta_is_identity():
    b = ODS.from_values([3, -1, 4, 1, -5, 9])
    assert list(convolve(ODS.delta(6), b, 6).coeffs) == list(b.coeffs)


def test_divisor_function():
    z = ODS.zeta(8)
    assert list(convolve(z, z, 8).coeffs) == [1, 2, 2, 3, 2, 4, 2, 4]


def test_eta_expansion():
    a = ODS.from_values([1, -2, 0, 0])
    assert list(convolve(a, ODS.zeta(4), 4).coeffs) == [1, -1, 1, -1]


def test_convolve_truncation_error():
    with pytest.raises(TruncationError):
        convolve(ODS.zeta(4), ODS.zeta(8), 5)


def test_mobius_small():
    mu = divide(ODS.delta(10), ODS.zeta(10), 10)
    assert list(mu.coeffs) == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert mu.exact


def test_self_division():
    a = ODS.from_values([2, 1, 0, 5, 3, 1, 1, 2])
    assert list(divide(a, a, 8).coeffs) == [1, 0, 0, 0, 0, 0, 0, 0]


def test_division_by_zero_leading():
    with pytest.raises(DivisionUndefinedError):
        divide(ODS.zeta(4), ODS.from_values([0, 1, 1, 1]), 4)
    with pytest.raises(DivisionUndefinedError):
        divide(ODS.zeta(4), ODS.from_values([1e-20, 1.0, 1.0, 1.0]), 4)


def test_exact_division_with_fractions():
    q = divide(ODS.delta(6), ODS.from_values([2, 1, 1, 1, 1, 1]), 6)
    assert q.coeffs[0] == Fraction(1, 2)
    assert list(convolve(q, ODS.from_values([2, 1, 1, 1, 1, 1]), 6).coeffs) == [1, 0, 0, 0, 0, 0]


def test_character_ratio_division():
    chi3 = lambda n: [0, 1, -1][n % 3]
    chi6 = lambda n: 0 if n % 2 == 0 else chi3(n)
    q = divide(ODS.from_function(chi6, 32), ODS.from_function(chi3, 32), 32)
    assert list(q.coeffs) == [1, 1] + [0] * 30


def test_evaluate_examples():
    assert evaluate(ODS.delta(5), 0.3 + 2j) == (1, 0)
    val, tail = evaluate(DirichletPolynomial({1: 1, 2: 1}), 1)
    assert val == 1.5 and tail == 0
    val, tail = evaluate(ODS.zeta(10 ** 6), 2)
    assert abs(val - math.pi ** 2 / 6) < 1e-6
    assert tail is not None and abs(val - math.pi ** 2 / 6) <= tail


def test_evaluate_tail_unknown_without_hint():
    a = ODS(np.ones(16, dtype=complex), None)
    assert evaluate(a, 3)[1] is None


def test_support_detection():
    basis = DirichletPolynomial({u: 1 for u in divisors(12)})
    p = detect_support(basis.to_series(64), 12)
    assert isinstance(p, DirichletPolynomial) and len(p) == 6
    bad = ODS.from_values([1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0])
    r = detect_support(bad, 12)
    assert isinstance(r, SupportRefuted) and r.witness == 5
    with pytest.raises(InsufficientDataError):
        detect_support(ODS.zeta(4), 12)


def test_ods_to_gds():
    g = ods_to_gds(ODS.delta(4))
    assert g.exponents == (0.0,) and g.coeffs == (1,)
    g = ods_to_gds(ODS.from_values([1, -2]))
    assert g.exponents == (0.0, math.log(2)) and g.coeffs == (1, -2)
    assert ods_to_gds(ODS.zeta(3)).exponents == (0.0, math.log(2), math.log(3))
    with pytest.raises(ValueError):
        GeneralDirichletSeries((0.0, 0.0), (1, 1))


def test_abscissa_estimates():
    assert abs(abscissa_estimate(ODS.zeta(2 ** 16)) - 1) < 0.2
    mu = divide(ODS.delta(2 ** 14), ODS.zeta(2 ** 14), 2 ** 14)
    assert abs(abscissa_estimate(mu) - 1) < 0.2
    assert abscissa_estimate(DirichletPolynomial({1: 1, 2: 1}).to_series(64)) <= 0
    assert abscissa_estimate(ODS.from_values([0] * 32)) == -math.inf


def test_tsv_round_trip():
    a = ODS.from_values([1.5, 0, -2j, 0, 0, 3 + 1j])
    text = dumps_coefficients(a)
    assert text.startswith("#")
    b = loads_coefficients(text)
    assert np.allclose(b.to_float().coeffs, a.to_float().coeffs)
    assert b.truncation == 6


def test_polynomial_json_round_trip():
    p = DirichletPolynomial({1: 1, 2: -0.5 + 1j})
    assert DirichletPolynomial.from_json(p.to_json()) == p
    assert DirichletPolynomial({1: 0, 3: 2}) == {3: 2}


ints = st.integers(-5, 5)


@given(st.lists(ints, min_size=12, max_size=12), st.lists(ints, min_size=12, max_size=12),
       st.lists(ints, min_size=12, max_size=12))
def test_convolution_commutative_associative_exact(a, b, c):
    A, B, C = (ODS.from_values(v) for v in (a, b, c))
    assert list(convolve(A, B, 12).coeffs) == list(convolve(B, A, 12).coeffs)
    left = convolve(convolve(A, B, 12), C, 12)
    right = convolve(A, convolve(B, C, 12), 12)
    assert list(left.coeffs) == list(right.coeffs)
    assert list(convolve(A, B, 12).coeffs) == brute_convolve(a, b)


@given(st.integers(0, 2 ** 32 - 1))
def test_round_trip_random_float(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=128) + 1j * rng.normal(size=128)
    b = rng.uniform(-1, 1, 128) + 1j * rng.uniform(-1, 1, 128)
    b /= np.maximum(1, np.abs(b))
    b[0] = 1
    A, B = ODS.from_values(a), ODS.from_values(b)
    back = divide(convolve(A, B, 128), B, 128).coeffs
    assert np.max(np.abs(back - a)) <= 1e-10 * max(1, np.max(np.abs(a)))


@given(st.integers(1, 60), st.sampled_from([0.5, -3.0, 2j, 1e-3]))
def test_support_verdict_scale_invariant(n, c):
    q = np.zeros(60, dtype=complex)
    q[0], q[1] = 1, 0.5
    q[n - 1] += 0.25
    s1 = detect_support(ODS.from_values(q), 12, 1e-9)
    s2 = detect_support(ODS.from_values(c * q), 12, abs(c) * 1e-9)
    assert type(s1) is type(s2)
    if isinstance(s1, SupportRefuted):
        assert s1.witness == s2.witness
    else:
        assert set(s1) == set(s2)


def test_mobius_matches_sieve():
    mu = divide(ODS.delta(2000), ODS.zeta(2000), 2000)
    assert list(mu.coeffs) == sieve_mobius(2000)


@given(st.lists(st.tuples(st.integers(1, 30), st.integers(-4, 4)), min_size=1, max_size=8),
       st.floats(0.5, 4))
def test_polynomial_evaluation_exact(support, s):
    p = DirichletPolynomial(dict(support))
    val, tail = evaluate(p, s)
    direct = sum(c * u ** (-s) for u, c in p.items())
    assert tail == 0
    assert abs(val - direct) <= 1e-12 * max(1, abs(direct))
