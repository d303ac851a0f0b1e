import math

import mpmath
import numpy as np
import pytest
from scipy import special as sps

from hamburger.errors import PoleError, PrecisionError
from hamburger.special import bernoulli_numbers, hurwitz_remainder_bound, hurwitz_zeta, loggamma


def slow_zeta2():
    # direct sum with integral tail correction: sum_{n<=N} n^-2 + 1/N - 1/(2N^2) + 1/(6N^3)
    N = 10 ** 5
    n = np.arange(1, N + 1, dtype=float)
    return float(np.sum(1 / n ** 2)) + 1 / N - 1 / (2 * N ** 2) + 1 / (6 * N ** 3)


def test_zeta2():
    assert abs(hurwitz_zeta(2, 1) - slow_zeta2()) < 1e-10
    assert abs(hurwitz_zeta(2, 1) - math.pi ** 2 / 6) < 1e-10


def test_bisection_identity():
    assert abs(hurwitz_zeta(3, 0.5) - (2 ** 3 - 1) * hurwitz_zeta(3, 1)) < 1e-10


def test_value_at_zero():
    assert abs(hurwitz_zeta(0, 0.25) - 0.25) < 1e-10


def test_pole():
    with pytest.raises(PoleError):
        hurwitz_zeta(1, 0.5)


def test_precision_error():
    with pytest.raises(PrecisionError):
        hurwitz_zeta(0.5 + 5000j, 0.5, max_terms=1000)


def test_against_mpmath():
    rng = np.random.default_rng(7)
    s = rng.uniform(-1, 3, 30) + 1j * rng.uniform(-30, 30, 30)
    x = rng.uniform(0.05, 1, 30)
    ours, bound = hurwitz_zeta(s, x, return_bound=True)
    for si, xi, v, b in zip(s, x, ours, bound):
        ref = complex(mpmath.zeta(complex(si), float(xi)))
        assert abs(v - ref) <= 1e-10 * max(1, abs(ref))
        assert b <= 1e-10


def test_remainder_bound_decreases():
    b = [float(hurwitz_remainder_bound(0.5 + 20j, 0.5, N, 10)) for N in (20, 40, 80)]
    assert b[0] > b[1] > b[2]


def test_loggamma_against_scipy():
    rng = np.random.default_rng(3)
    z = rng.uniform(-5, 10, 200) + 1j * rng.uniform(-60, 60, 200)
    ours = np.exp(loggamma(z))
    ref = np.exp(sps.loggamma(z))
    assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-12
    with pytest.raises(PoleError):
        loggamma(-2.0)


def test_bernoulli():
    b = bernoulli_numbers(9)
    assert [str(v) for v in b] == ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30"]
