"""Atomic measures on [0, inf), their Laplace transforms, and two constructive
uses of Laplace uniqueness.

Interval-mass reconstruction
    The mass ``mu([a, b])`` is recovered from the integer samples
    ``L(k) = int exp(-k t) mu(dt)``, ``k = 0..degree``.  Under ``x = exp(-t)``
    the samples are the moments of the pushed-forward measure on [0, 1], so
    any polynomial ``P(x) = sum p_j x^j`` integrates as ``sum p_j L(j)``.
    ``P`` approximates the piecewise-linear ramp ``f_eps`` (1 on
    ``[e^-b, e^-a]``, 0 outside ``[e^-b - eps, e^-a + eps]``).

    The moment map is exponentially ill-conditioned, so the linear
    combination is evaluated in exact integer fixed point.  Samples therefore
    need ``required_precision(degree)`` bits to be useful; see
    :func:`laplace_samples`.

Rational inverse Laplace
    Partial fractions of a proper rational function and the explicit density
    ``sum c_r t^{r-1} e^{z t} / (r-1)!``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly
from scipy import integrate, special
from scipy.fft import dct, fft, next_fast_len
from scipy.stats import binom

from .dirichlet_algebra import GeneralDirichletSeries
from .errors import (IllConditionedError, InsufficientSamplesError,
                     NotALaplaceTransformError)

GRID_POINTS = 10_001
GUARD_BITS = 64


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite signed/complex atomic measure ``sum c_k delta_{t_k}``."""

    atoms: tuple[tuple[float, complex], ...] = ()
    total_variation: float = field(init=False)

    def __post_init__(self):
        merged: dict[float, complex] = {}
        for t, c in self.atoms:
            t = float(t)
            if t < 0 or not math.isfinite(t):
                raise ValueError(f"atom location {t} outside [0, inf)")
            merged[t] = merged.get(t, 0j) + complex(c)
        atoms = tuple((t, c) for t, c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "total_variation", float(sum(abs(c) for _, c in atoms)))

    @classmethod
    def from_gds(cls, g: GeneralDirichletSeries) -> "DiscreteMeasure":
        return cls(tuple(zip(g.exponents, g.coeffs)))

    @property
    def locations(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c for _, c in self.atoms], dtype=complex)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms + other.atoms)

    def __rmul__(self, alpha: Number) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple((t, alpha * c) for t, c in self.atoms))

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self + (-1) * other

    def mass(self, a: float, b: float) -> complex:
        """Exact mass of the closed interval ``[a, b]``."""
        return complex(sum((c for t, c in self.atoms if a <= t <= b), 0j))

    def to_json(self) -> list[list[float]]:
        return [[t, c.real, c.imag] for t, c in self.atoms]

    @classmethod
    def from_json(cls, obj: Iterable[Sequence[float]]) -> "DiscreteMeasure":
        atoms = []
        for row in obj:
            if len(row) == 2:
                t, re_ = row
                im_ = 0.0
            else:
                t, re_, im_ = row
            atoms.append((float(t), complex(float(re_), float(im_))))
        return cls(tuple(atoms))


def laplace(mu: DiscreteMeasure, s: complex) -> complex:
    """``sum_k c_k exp(-s t_k)``."""
    if not mu.atoms:
        return 0j
    return complex(np.sum(mu.weights * np.exp(-complex(s) * mu.locations)))


def total_variation(mu: DiscreteMeasure) -> float:
    return mu.total_variation


def uniqueness_gap(mu1: DiscreteMeasure, mu2: DiscreteMeasure,
                   grid: Iterable[float]) -> float:
    """Largest ``|L mu1(s) - L mu2(s)|`` over ``grid``; 0 iff the transforms agree there."""
    pts = list(grid)
    if not pts:
        raise ValueError("grid must be non-empty")
    diff = mu1 - mu2
    return max(abs(laplace(diff, s)) for s in pts)


class SampleSet(dict):
    """``k -> L mu(k)`` with a known absolute accuracy for every entry."""

    def __init__(self, data=(), accuracy: float | None = None):
        super().__init__(data)
        self.accuracy = accuracy


def laplace_samples(mu: DiscreteMeasure, kmax: int, prec: int = 53) -> SampleSet:
    """Samples ``L mu(k)`` for ``k = 0..kmax``.

    With ``prec > 53`` the samples are :class:`mpmath.mpc` values with
    absolute error below ``TV * 2^-prec``, as high-degree reconstruction needs.
    """
    tv = mu.total_variation
    if prec <= 53:
        return SampleSet({k: laplace(mu, k) for k in range(kmax + 1)},
                         accuracy=4 * tv * 2.0 ** -53)
    out = SampleSet(accuracy=tv * 2.0 ** -prec)
    with mpmath.workprec(prec + 32):
        xs = [mpmath.exp(-mpmath.mpf(t)) for t, _ in mu.atoms]
        cs = [mpmath.mpc(c.real, c.imag) for _, c in mu.atoms]
        powers = [mpmath.mpf(1)] * len(xs)
        for k in range(kmax + 1):
            out[k] = mpmath.fsum(c * p for c, p in zip(cs, powers)) if xs else mpmath.mpc(0)
            powers = [p * x for p, x in zip(powers, xs)]
    return out


# -- the ramp f_eps --------------------------------------------------------

@dataclass(frozen=True)
class MollifierRamp:
    """Continuous piecewise-linear stand-in for the indicator of ``t in [a, b]``.

    In the variable ``x = exp(-t)`` it equals 1 on ``[e^-b, e^-a]``, 0 outside
    ``[e^-b - eps, e^-a + eps]`` and is linear on the two ramps of width eps.
    """

    a: float
    b: float
    epsilon: float

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError("need 0 < a < b")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.lo - self.epsilon < 0 or self.hi + self.epsilon > 1:
            raise ValueError("epsilon too large: the ramps leave [0, 1]")

    @property
    def lo(self) -> float:
        return math.exp(-self.b)

    @property
    def hi(self) -> float:
        return math.exp(-self.a)

    @property
    def breakpoints(self) -> np.ndarray:
        e = self.epsilon
        return np.array([self.lo - e, self.lo, self.hi, self.hi + e])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        e = self.epsilon
        rising = (x - (self.lo - e)) / e
        falling = ((self.hi + e) - x) / e
        return np.clip(np.minimum(rising, falling), 0.0, 1.0)

    def ambiguous(self, t: float) -> bool:
        """True when an atom at ``t`` sits on a ramp or on an interval endpoint."""
        x = math.exp(-t)
        e = self.epsilon
        on_ramp = (self.lo - e <= x < self.lo) or (self.hi < x <= self.hi + e)
        at_edge = math.isclose(t, self.a, rel_tol=0, abs_tol=1e-12) or \
            math.isclose(t, self.b, rel_tol=0, abs_tol=1e-12)
        return on_ramp or at_edge


def mollifier_value(f: MollifierRamp, x: float) -> float:
    return float(f(x))


# -- polynomial approximants ----------------------------------------------

def _log_cheb_growth(k: np.ndarray) -> np.ndarray:
    """``log T_k(3)``: absolute coefficient sum of the shifted Chebyshev polynomial."""
    k = np.asarray(k, dtype=float)
    ach = math.acosh(3.0)
    return k * ach + np.log1p(np.exp(-2 * k * ach)) - math.log(2.0)


def _logsumexp(v: np.ndarray) -> float:
    v = v[np.isfinite(v)]
    if v.size == 0:
        return -math.inf
    m = float(np.max(v))
    return m + math.log(float(np.sum(np.exp(v - m))))


@dataclass(frozen=True)
class _Approximant:
    kind: str
    degree: int
    coeffs: np.ndarray          # Chebyshev coefficients or Bernstein node values
    sup_error: float
    log_amplification: float    # log of sum_j |p_j| in the monomial basis


def _chebyshev_approximant(f: MollifierRamp, n: int) -> _Approximant:
    k = np.arange(n + 1)
    u = np.cos(np.pi * (k + 0.5) / (n + 1))
    c = dct(f((u + 1) / 2), type=2) / (n + 1)
    c[0] /= 2
    err = _chebyshev_sup_error(c, f)
    with np.errstate(divide="ignore"):
        logamp = _logsumexp(np.log(np.abs(c)) + _log_cheb_growth(k))
    return _Approximant("chebyshev", n, c, err, logamp)


def _chebyshev_sup_error(c: np.ndarray, f: MollifierRamp, slack: float = 1e-3) -> float:
    """Upper bound on ``sup_[0,1] |P - f|`` for ``P(x) = sum c_k T_k(2x - 1)``.

    With ``x = (1 + cos th)/2`` both sides are Lipschitz in ``th``:
    ``|dP/dth| <= n ||P||`` (Bernstein's inequality) and
    ``|df/dth| <= 1/(2 eps)``.  The error is sampled on a uniform ``th`` grid
    (shifted FFT blocks) fine enough for the gap term to be about ``slack``.
    """
    n = len(c) - 1
    size = next_fast_len(max(4 * (n + 1), 4096))
    k = np.arange(n + 1)
    lip_f = 1 / (2 * f.epsilon)

    def block(shift: float) -> np.ndarray:
        coef = np.zeros(size, dtype=complex)
        coef[:n + 1] = c * np.exp(1j * k * shift)
        return fft(coef).real          # P(cos(shift - 2 pi j / size))

    p0 = block(0.0)
    blocks = max(1, int(math.ceil(math.pi * (1.2 * n * np.max(np.abs(p0)) + lip_f)
                                  / (slack * size))))
    step = 2 * math.pi / size
    p_max = err = 0.0
    for b in range(blocks):
        shift = step * b / blocks
        p = p0 if b == 0 else block(shift)
        th = shift - step * np.arange(size)
        p_max = max(p_max, float(np.max(np.abs(p))))
        err = max(err, float(np.max(np.abs(p - f((1 + np.cos(th)) / 2)))))
    half_gap = math.pi / (size * blocks)
    p_norm = p_max / (1 - n * half_gap)
    return err + half_gap * (n * p_norm + lip_f)


def _bernstein_approximant(f: MollifierRamp, n: int) -> _Approximant:
    k = np.arange(n + 1)
    vals = f(k / n)
    grid = np.union1d(np.linspace(0.0, 1.0, GRID_POINTS), f.breakpoints)
    approx = np.concatenate([binom.pmf(k[None, :], n, chunk[:, None]) @ vals
                             for chunk in np.array_split(grid, max(1, grid.size * (n + 1) // 4_000_000))])
    err = float(np.max(np.abs(approx - f(grid))))
    # sum_j |p_j| <= sum_k f(k/n) C(n,k) 2^(n-k)
    with np.errstate(divide="ignore"):
        logamp = _logsumexp(np.log(vals) + special.gammaln(n + 1) - special.gammaln(k + 1)
                            - special.gammaln(n - k + 1) + (n - k) * math.log(2.0))
    return _Approximant("bernstein", n, vals, err, logamp)


def required_precision(degree: int, approximant: str = "chebyshev") -> int:
    """Fixed-point bits making sample quantisation negligible at ``degree``."""
    if approximant == "chebyshev":
        growth = float(_log_cheb_growth(np.array([degree]))[0]) / math.log(2.0)
    elif approximant == "bernstein":
        growth = degree * math.log2(3.0)
    else:
        raise ValueError(f"unknown approximant {approximant!r}")
    return int(math.ceil(growth)) + GUARD_BITS


# -- fixed-point moment arithmetic ----------------------------------------

def _to_fixed(v, bits: int) -> tuple[int, int]:
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        with mpmath.workprec(bits + 64):
            z = mpmath.mpc(v) * mpmath.ldexp(1, bits)
            return int(mpmath.nint(z.real)), int(mpmath.nint(z.imag))
    if isinstance(v, (int, Fraction)):
        return round(Fraction(v) * 2 ** bits), 0
    z = complex(v)
    return (round(Fraction(z.real) * 2 ** bits), round(Fraction(z.imag) * 2 ** bits))


def _sample_accuracy(v) -> float:
    """Representation accuracy of one sample value (absolute)."""
    if isinstance(v, (int, Fraction)):
        return 0.0
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        parts = [v] if isinstance(v, mpmath.mpf) else [v.real, v.imag]
        bits = max(max(p._mpf_[3] for p in parts), 53)
        mag = float(abs(v))
        return mag * 2.0 ** (1 - bits)
    return abs(complex(v)) * 2.0 ** -52


def _chebyshev_moments(m: np.ndarray, n: int) -> list:
    """Exact ``int T*_k(x) dnu`` for ``k = 0..n`` from integer moments ``m_0..m_n``.

    Uses ``T*_{k+1} x^j = 4 T*_k x^{j+1} - 2 T*_k x^j - T*_{k-1} x^j``.
    """
    out = [m[0]]
    if n == 0:
        return out
    prev = m
    cur = 2 * m[1:] - m[:-1]
    out.append(cur[0])
    for _ in range(1, n):
        cur, prev = 4 * cur[1:] - 2 * cur[:-1] - prev[:-2], cur
        out.append(cur[0])
    return out


def _bernstein_moments(m: np.ndarray, n: int) -> list:
    """``int x^k (1-x)^(n-k) dnu`` for ``k = 0..n`` via the forward-difference table."""
    out = [None] * (n + 1)
    out[n] = m[n]
    row = m
    for r in range(1, n + 1):
        row = row[:-1] - row[1:]
        out[n - r] = row[n - r]
    return out


def _fixed_dot(weights: Iterable[Fraction], moments: Iterable[int], bits: int) -> float:
    total = Fraction(0)
    for w, mom in zip(weights, moments):
        if w:
            total += w * mom
    return float(total / 2 ** bits)


@dataclass(frozen=True)
class Reconstruction:
    estimate: complex
    error_bound: float
    approximation_error: float
    sample_term: float
    degree: int
    epsilon: float
    approximant: str

    def to_json(self) -> dict:
        return {
            "estimate": [self.estimate.real, self.estimate.imag],
            "error_bound": self.error_bound,
            "approximation_error": self.approximation_error,
            "sample_term": self.sample_term,
            "degree": self.degree,
            "epsilon": self.epsilon,
            "approximant": self.approximant,
        }


def interval_mass_from_laplace(samples: Mapping[int, Number], a: float, b: float,
                               epsilon: float, degree: int, total_variation: float,
                               *, approximant: str = "chebyshev",
                               sample_error: float | None = None) -> Reconstruction:
    """Estimate ``mu([a, b])`` from the Laplace samples ``L mu(0..degree)``.

    ``error_bound = 2 TV eps + TV sup|f_eps - P| + sample_error * sum_j |p_j|``.
    For the Chebyshev interpolant the supremum is a certified upper bound
    (see :func:`_chebyshev_sup_error`); for Bernstein it is the maximum over a
    10^4-point grid plus the ramp breakpoints.  The bound is sound for atoms
    that stay off the ramps (see :meth:`MollifierRamp.ambiguous`).
    """
    missing = [k for k in range(degree + 1) if k not in samples]
    if missing:
        raise InsufficientSamplesError(
            f"need samples for k = 0..{degree}; missing {missing[:5]}")
    if degree < 1:
        raise ValueError("degree must be positive")
    ramp = MollifierRamp(a, b, epsilon)
    if approximant == "chebyshev":
        approx = _chebyshev_approximant(ramp, degree)
    elif approximant == "bernstein":
        approx = _bernstein_approximant(ramp, degree)
    else:
        raise ValueError(f"unknown approximant {approximant!r}")

    bits = required_precision(degree, approximant)
    raw = [samples[k] for k in range(degree + 1)]
    fixed = [_to_fixed(v, bits) for v in raw]
    if sample_error is None:
        sample_error = getattr(samples, "accuracy", None)
    if sample_error is None:
        sample_error = max(_sample_accuracy(v) for v in raw)
    sample_error += 2.0 ** -bits

    parts = []
    for idx in (0, 1):
        m = np.empty(degree + 1, dtype=object)
        m[:] = [f[idx] for f in fixed]
        if not any(m):
            parts.append(0.0)
            continue
        if approximant == "chebyshev":
            moments = _chebyshev_moments(m, degree)
            weights = [Fraction(float(c)) for c in approx.coeffs]
        else:
            moments = _bernstein_moments(m, degree)
            weights = [Fraction(float(v)) * math.comb(degree, k)
                       for k, v in enumerate(approx.coeffs)]
        parts.append(_fixed_dot(weights, moments, bits))
    estimate = complex(parts[0], parts[1])

    tv = float(total_variation)
    if sample_error == 0 or approx.log_amplification == -math.inf:
        sample_term = 0.0
    else:
        log_term = math.log(sample_error) + approx.log_amplification
        sample_term = math.exp(log_term) if log_term < 700 else math.inf
    bound = 2 * tv * epsilon + tv * approx.sup_error + sample_term
    if tv == 0 and estimate == 0:
        bound = 0.0
    return Reconstruction(estimate, bound, approx.sup_error, sample_term, degree,
                          epsilon, approximant)


# -- rational functions ----------------------------------------------------

def _trim(c: np.ndarray, tol: float = 0.0) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    end = c.size
    while end > 1 and abs(c[end - 1]) <= tol * scale:
        end -= 1
    return c[:end]


@dataclass(frozen=True)
class RationalFunction:
    """``numerator / denominator`` with ascending-degree coefficients; denominator made monic."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]

    def __post_init__(self):
        num = _trim(np.asarray(self.numerator, dtype=complex))
        den = _trim(np.asarray(self.denominator, dtype=complex))
        if not np.any(den):
            raise ZeroDivisionError("denominator is identically zero")
        lead = den[-1]
        object.__setattr__(self, "numerator", tuple(num / lead))
        object.__setattr__(self, "denominator", tuple(den / lead))

    def __call__(self, s):
        return nppoly.polyval(s, self.numerator) / nppoly.polyval(s, self.denominator)


@dataclass(frozen=True)
class PartialFractions:
    polynomial_part: tuple[complex, ...]
    poles: tuple[tuple[complex, tuple[complex, ...]], ...]

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        total = nppoly.polyval(s, self.polynomial_part)
        for z, cs in self.poles:
            for r, c in enumerate(cs, start=1):
                total = total + c / (s - z) ** r
        return total

    def recombine(self) -> tuple[np.ndarray, np.ndarray]:
        """Numerator/denominator over the common (monic) denominator."""
        den = np.array([1.0 + 0j])
        for z, cs in self.poles:
            den = nppoly.polymul(den, nppoly.polypow([-z, 1], len(cs)))
        num = nppoly.polymul(self.polynomial_part, den)
        for i, (z, cs) in enumerate(self.poles):
            others = np.array([1.0 + 0j])
            for j, (w, ds) in enumerate(self.poles):
                if j != i:
                    others = nppoly.polymul(others, nppoly.polypow([-w, 1], len(ds)))
            m = len(cs)
            for r, c in enumerate(cs, start=1):
                term = nppoly.polymul(others, nppoly.polypow([-z, 1], m - r))
                num = nppoly.polyadd(num, c * term)
        return _trim(num), den


def _taylor_shift(p: np.ndarray, z: complex) -> np.ndarray:
    """Coefficients of ``p(z + u)`` in ``u`` (repeated synthetic division)."""
    c = np.array(p, dtype=complex)
    n = c.size
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += z * c[j + 1]
    return c


def partial_fractions(F: RationalFunction, *, cluster_tol: float = 1e-3,
                      residual_tol: float = 1e-8, seed: int = 0) -> PartialFractions:
    """Decompose ``F = P + sum_i sum_r c_{r,i} / (s - z_i)^r``.

    Roots come from companion-matrix eigenvalues; roots closer than
    ``cluster_tol`` (relative) are merged into one pole of higher order and
    the merged factorisation must reproduce the denominator, otherwise the
    decomposition is rejected as ill-conditioned.
    """
    num = np.asarray(F.numerator, dtype=complex)
    den = np.asarray(F.denominator, dtype=complex)
    if den.size < 2:
        raise ValueError("denominator must have degree >= 1")
    quot, rem = nppoly.polydiv(num, den)
    quot = _trim(quot)
    rem = np.asarray(rem, dtype=complex)

    roots = np.roots(den[::-1])
    clusters: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            centre = np.mean(cl)
            if abs(r - centre) <= cluster_tol * max(1.0, abs(centre)):
                cl.append(r)
                break
        else:
            clusters.append([r])

    poles: list[tuple[complex, int]] = []
    for cl in clusters:
        z = complex(np.mean(cl))
        m = len(cl)
        if m > 1:
            deriv = nppoly.polyder(den, m - 1)
            d2 = nppoly.polyder(deriv)
            for _ in range(20):
                fz, dfz = nppoly.polyval(z, deriv), nppoly.polyval(z, d2)
                if dfz == 0:
                    break
                step = fz / dfz
                z -= step
                if abs(step) <= 1e-16 * max(1.0, abs(z)):
                    break
        poles.append((z, m))

    rebuilt = np.array([1.0 + 0j])
    for z, m in poles:
        rebuilt = nppoly.polymul(rebuilt, nppoly.polypow([-z, 1], m))
    if np.max(np.abs(rebuilt - den)) > 1e-8 * max(1.0, float(np.max(np.abs(den)))):
        raise IllConditionedError("clustered roots: merged factorisation does not "
                                  "reproduce the denominator")
    seps = [abs(z - w) for i, (z, _) in enumerate(poles) for w, _ in poles[i + 1:]]
    if seps and min(seps) <= cluster_tol:
        raise IllConditionedError("distinct poles closer than the clustering tolerance")

    out = []
    for z, m in poles:
        other = np.array([1.0 + 0j])
        for w, mw in poles:
            if w != z:
                other = nppoly.polymul(other, nppoly.polypow([z - w, 1], mw))
        top = _taylor_shift(rem, z)
        # power-series division top / other, first m terms
        series = np.zeros(m, dtype=complex)
        top = np.concatenate([top, np.zeros(max(0, m - top.size), dtype=complex)])
        oth = np.concatenate([other, np.zeros(max(0, m - other.size), dtype=complex)])
        for j in range(m):
            acc = top[j] - sum(series[i] * oth[j - i] for i in range(j))
            series[j] = acc / oth[0]
        # series[j] multiplies u^j / u^m  ->  c_{m-j}
        cs = tuple(complex(series[m - r]) for r in range(1, m + 1))
        out.append((z, cs))

    pf = PartialFractions(tuple(complex(c) for c in quot), tuple(out))
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=16) * 3 + 1j * rng.normal(size=16) * 3
    lhs, rhs = F(pts), pf(pts)
    rel = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)
    if float(np.max(rel)) > residual_tol:
        raise IllConditionedError(f"reconstruction residual {float(np.max(rel)):.3g}")
    return pf


@dataclass(frozen=True)
class RationalInverse:
    """``constant * delta_0 + f(t) dt`` with ``f(t) = sum c_r t^(r-1) e^(z t) / (r-1)!``."""

    constant: complex
    terms: tuple[tuple[complex, tuple[complex, ...]], ...]

    @property
    def max_real_pole(self) -> float:
        return max((z.real for z, _ in self.terms), default=-math.inf)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t, dtype=complex)
        for z, cs in self.terms:
            ez = np.exp(z * t)
            for r, c in enumerate(cs, start=1):
                total = total + c * t ** (r - 1) * ez / math.factorial(r - 1)
        return total

    __call__ = density

    def transform(self, s: complex) -> complex:
        """Closed-form Laplace transform of the density part."""
        return complex(sum(c / (s - z) ** r for z, cs in self.terms
                           for r, c in enumerate(cs, start=1)))

    def tail_cutoff(self, s: complex, tol: float = 1e-12) -> float:
        """Horizon ``T`` with ``int_T^inf |f(t) e^{-st}| dt < tol``."""
        sigma = complex(s).real
        if self.terms and sigma <= self.max_real_pole:
            raise ValueError("evaluation abscissa must exceed every pole's real part")

        def tail(T):
            total = 0.0
            for z, cs in self.terms:
                beta = sigma - z.real
                for r, c in enumerate(cs, start=1):
                    if c == 0:
                        continue
                    total += abs(c) / math.factorial(r - 1) * \
                        special.gammaincc(r, beta * T) * special.gamma(r) / beta ** r
            return total

        T = 1.0
        while tail(T) >= tol:
            T *= 1.5
        return T

    def numeric_transform(self, s: complex, tol: float = 1e-12) -> complex:
        """Adaptive quadrature of ``int_0^T f(t) e^{-st} dt`` (density part only)."""
        if not self.terms:
            return 0j
        s = complex(s)
        T = self.tail_cutoff(s, tol)

        def g(t):
            return complex(self.density(np.array([t]))[0] * np.exp(-s * t))

        re, _ = integrate.quad(lambda t: g(t).real, 0.0, T, epsabs=tol, epsrel=1e-12, limit=500)
        im, _ = integrate.quad(lambda t: g(t).imag, 0.0, T, epsabs=tol, epsrel=1e-12, limit=500)
        return complex(re, im)


def inverse_laplace_rational(F: RationalFunction, *, poly_tol: float = 1e-12) -> RationalInverse:
    """Measure whose Laplace transform is ``F``: an atom at 0 plus an explicit density.

    A non-constant polynomial part cannot be a Laplace transform of such a
    measure (it does not stay bounded as ``s -> +inf``).
    """
    if len(F.denominator) < 2:
        poly = np.asarray(F.numerator, dtype=complex)
        pf = PartialFractions(tuple(poly), ())
    else:
        pf = partial_fractions(F)
    poly = np.asarray(pf.polynomial_part, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(poly))) if poly.size else 0.0)
    if poly.size > 1 and np.any(np.abs(poly[1:]) > poly_tol * scale):
        raise NotALaplaceTransformError(
            f"polynomial part has degree {poly.size - 1}; only constants are Laplace transforms")
    constant = complex(poly[0]) if poly.size else 0j
    return RationalInverse(constant, pf.poles)


def measure_json_text(mu: DiscreteMeasure) -> str:
    return json.dumps(mu.to_json())


def samples_to_json(samples: Mapping[int, Number]) -> dict[str, list[float]]:
    return {str(k): [float(complex(v).real), float(complex(v).imag)]
            for k, v in sorted(samples.items())}


def samples_from_json(obj: Mapping[str, Sequence[float]]) -> dict[int, complex]:
    return {int(k): complex(float(v[0]), float(v[1])) for k, v in obj.items()}
