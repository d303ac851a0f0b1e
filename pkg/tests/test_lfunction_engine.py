import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hamburger.dirichlet_algebra import OrdinaryDirichletSeries as ODS, evaluate
from hamburger.errors import ImprimitiveCharacterError, PoleError, SelectorError, UnsupportedError
from hamburger.lfunction_engine import (
    DirichletCharacter,
    characters_mod,
    completed_l,
    conductor_and_primitivize,
    functional_equation_residual,
    gauss_sum,
    l_value,
    resolve,
    root_number,
    to_level_form,
)


def euler_phi(q):
    return sum(1 for a in range(q) if math.gcd(a, q) == 1)


def test_counts_and_small_tables():
    for q in range(1, 40):
        chars = characters_mod(q)
        assert len(chars) == euler_phi(q)
        assert chars[0].is_principal
    c3 = characters_mod(3)
    assert len(c3) == 2 and c3[1](2) == -1
    c4 = characters_mod(4)
    assert c4[1](3) == -1
    c5 = characters_mod(5)
    assert sorted(complex(c(2)).imag for c in c5 if not c.is_real) == [-1, 1]


@pytest.mark.parametrize("q", [5, 8, 12, 15, 16, 21, 24, 32])
def test_multiplicativity_and_orthogonality(q):
    for chi in characters_mod(q):
        assert chi(1) == 1
        for a in range(q):
            assert (chi.angle(a) is None) == (math.gcd(a, q) != 1)
            for b in range(q):
                if chi.angle(a) is not None and chi.angle(b) is not None:
                    assert chi.angle(a * b) == (chi.angle(a) + chi.angle(b)) % 1
        if not chi.is_principal:
            # exact orthogonality: angles of a non-principal character are equidistributed
            counts = {}
            for a in range(q):
                if chi.angle(a) is not None:
                    counts[chi.angle(a)] = counts.get(chi.angle(a), 0) + 1
            assert len(set(counts.values())) == 1
        assert chi.primitive == (chi.conductor == q)


def test_conductor():
    chi3 = resolve("3.1")
    assert conductor_and_primitivize(chi3) == (3, chi3)
    f, star = conductor_and_primitivize(resolve("6.1"))
    assert f == 3 and star == chi3
    for q in (5, 12, 30):
        assert conductor_and_primitivize(characters_mod(q)[0])[0] == 1


def test_gauss_sums():
    assert abs(gauss_sum(resolve("3.1")) - 1j * math.sqrt(3)) < 1e-12
    assert abs(gauss_sum(resolve("4.1")) - 2j) < 1e-12
    for chi in characters_mod(5)[1:]:
        assert abs(abs(gauss_sum(chi)) - math.sqrt(5)) < 1e-10
    with pytest.raises(ImprimitiveCharacterError):
        gauss_sum(resolve("6.1"))


def test_l_values():
    assert abs(l_value(resolve("4.1"), 1) - math.pi / 4) < 1e-10
    assert abs(l_value(resolve("zeta"), 2) - math.pi ** 2 / 6) < 1e-12
    chi3 = resolve("3.1")
    direct = evaluate(ODS.from_function(lambda n: chi3.exact_value(n), 10 ** 6), 2)[0]
    assert abs(l_value(chi3, 2) - direct) < 1e-9
    with pytest.raises(PoleError):
        l_value(resolve("5.0"), 1)


def leibniz_accelerated():
    # Euler transform of sum (-1)^k/(2k+1) via mpmath's nsum
    return float(mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1), [0, mpmath.inf]))


def test_l_chi4_at_one_oracle():
    assert abs(l_value(resolve("4.1"), 1) - leibniz_accelerated()) < 1e-10


@pytest.mark.parametrize("sel", ["3.1", "4.1", "5.1", "5.2", "7.1", "8.3", "12.3"])
def test_against_mpmath_dirichlet(sel):
    chi = resolve(sel)
    table = [chi(a) for a in range(chi.modulus)]
    for s in (0.5 + 14j, -0.5 + 3j, 2.5 - 7j):
        ref = complex(mpmath.dirichlet(s, table))
        assert abs(l_value(chi, s) - ref) < 1e-10 * max(1, abs(ref))


def test_completed_function():
    chi4 = resolve("4.1")
    assert functional_equation_residual(chi4, 0.5 + 3j) <= 1e-8
    assert abs(abs(root_number(chi4)) - 1) < 1e-12
    lam = completed_l(resolve("3.1"), np.array([0.2, 0.7, 1.5, 3.0]))
    assert np.max(np.abs(lam.imag)) < 1e-10
    with pytest.raises(UnsupportedError):
        completed_l(resolve("5.0"), 0.5)


def test_level_form():
    d3, f3 = to_level_form(resolve("3.1"))
    d4, f4 = to_level_form(resolve("4.1"))
    assert d3.gamma == d4.gamma
    assert (f3.N, f4.N) == (3, 4) and f3.k == 1
    d5, _ = to_level_form(resolve("5.even"))
    assert d5.gamma != d3.gamma
    assert d3.poles == () and to_level_form(resolve("zeta"))[0].poles == ((1 + 0j, 1),)


@pytest.mark.parametrize("sel", ["3.1", "4.1", "5.1", "5.3", "zeta", "6.1", "8.1", "20.3"])
def test_level_form_identity(sel):
    d, _ = to_level_form(resolve(sel))
    rng = np.random.default_rng(11)
    s = rng.uniform(0, 1, 20) + 1j * rng.uniform(-20, 20, 20)
    assert np.max(d.residual(s)) <= 1e-8


@given(st.floats(-1, 3), st.floats(-25, 25), st.sampled_from(["5.1", "7.2", "8.3", "13.4"]))
def test_conjugation_symmetry(sigma, t, sel):
    chi = resolve(sel)
    s = complex(sigma, t)
    if abs(s - 1) < 1e-6:
        return
    assert abs(l_value(chi, s.conjugate()) - np.conj(l_value(chi.conjugate(), s))) < 1e-10


def test_selectors_and_json():
    assert resolve("1.0") == resolve("zeta")
    assert resolve("5.odd").parity == 1 and resolve("5.even").parity == 0
    for bad in ("3", "3.9", "x.1", "0.0", "4.even"):
        with pytest.raises(SelectorError):
            resolve(bad)
    chi = resolve("7.2")
    assert DirichletCharacter.from_json(chi.to_json()) == chi
    assert chi.to_json()["values"][1] == "0/1"


def test_descriptor_coefficients_exact_for_real_characters():
    d, _ = to_level_form(resolve("3.1"))
    a = d.coefficients(6)
    assert a.exact and list(a.coeffs) == [1, -1, 0, 1, -1, 0]
    d, _ = to_level_form(resolve("5.1"))
    assert not d.coefficients(6).exact
