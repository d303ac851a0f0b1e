"""Arithmetic on ordinary and general Dirichlet series.

Coefficient vectors are stored 0-based (``coeffs[n - 1] == a_n``).  Two
arithmetic modes coexist:

* exact mode -- ``dtype=object`` arrays holding Python ``int`` or
  :class:`fractions.Fraction` values, used for Möbius/divisor identities and
  real-character coefficients;
* floating mode -- ``complex128`` arrays.

Operations combining an exact and a floating series fall back to floating
mode.  Truncation is always explicit: nothing is silently padded by zeros.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DivisionUndefinedError, InsufficientDataError, TruncationError

#: default detector tolerance in floating mode (exact mode uses 0)
DEFAULT_TOL = 1e-9
#: relative threshold under which a floating leading coefficient counts as zero
LEADING_TOL = 1e-14


def _is_exact_value(v) -> bool:
    return isinstance(v, (int, Fraction, np.integer)) and not isinstance(v, bool)


def _as_exact(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _exact_div(x, y):
    if x == 0:
        return 0
    if y == 1:
        return x
    if y == -1:
        return -x
    return _as_exact(Fraction(x) / Fraction(y))


@dataclass(frozen=True)
class OrdinaryDirichletSeries:
    """Truncated coefficients ``a_1..a_M`` of ``sum a_n n^{-s}``.

    ``sigma_a_hint`` is the declared abscissa of absolute convergence: ``None``
    when unknown, ``-inf`` when the series is known to vanish beyond the
    truncation (a Dirichlet polynomial).
    """

    coeffs: np.ndarray
    sigma_a_hint: float | None = None

    def __post_init__(self):
        arr = self.coeffs
        if not isinstance(arr, np.ndarray):
            arr = np.asarray(list(arr))
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("coefficient vector must be one-dimensional and non-empty")
        if arr.dtype != object:
            arr = arr.astype(complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_values(cls, values: Iterable, *, exact: bool | None = None,
                    sigma_a_hint: float | None = None) -> "OrdinaryDirichletSeries":
        vals = list(values)
        if exact is None:
            exact = all(_is_exact_value(v) for v in vals)
        if exact:
            arr = np.empty(len(vals), dtype=object)
            arr[:] = [_as_exact(v) for v in vals]
        else:
            arr = np.asarray([complex(v) for v in vals], dtype=complex)
        return cls(arr, sigma_a_hint)

    @classmethod
    def from_function(cls, fn: Callable[[int], Number], truncation: int, *,
                      exact: bool | None = None,
                      sigma_a_hint: float | None = None) -> "OrdinaryDirichletSeries":
        return cls.from_values((fn(n) for n in range(1, truncation + 1)),
                               exact=exact, sigma_a_hint=sigma_a_hint)

    @classmethod
    def delta(cls, truncation: int) -> "OrdinaryDirichletSeries":
        """Coefficients of the constant function 1."""
        return cls.from_function(lambda n: int(n == 1), truncation, exact=True,
                                 sigma_a_hint=-math.inf)

    @classmethod
    def zeta(cls, truncation: int) -> "OrdinaryDirichletSeries":
        return cls.from_function(lambda n: 1, truncation, exact=True, sigma_a_hint=1.0)

    # -- accessors --------------------------------------------------------
    @property
    def truncation(self) -> int:
        return int(self.coeffs.size)

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def __getitem__(self, n: int):
        if not 1 <= n <= self.truncation:
            raise TruncationError(f"index {n} outside 1..{self.truncation}")
        return self.coeffs[n - 1]

    def to_float(self) -> "OrdinaryDirichletSeries":
        if not self.exact:
            return self
        return OrdinaryDirichletSeries(
            np.array([complex(v) for v in self.coeffs]), self.sigma_a_hint)

    def truncate(self, n_max: int) -> "OrdinaryDirichletSeries":
        _check_truncation(n_max, self)
        return OrdinaryDirichletSeries(self.coeffs[:n_max].copy(), self.sigma_a_hint)

    def scale(self, c) -> "OrdinaryDirichletSeries":
        if self.exact and _is_exact_value(c):
            arr = np.empty(self.truncation, dtype=object)
            arr[:] = [_as_exact(c * v) for v in self.coeffs]
            return OrdinaryDirichletSeries(arr, self.sigma_a_hint)
        return OrdinaryDirichletSeries(self.to_float().coeffs * complex(c), self.sigma_a_hint)

    def abs_coeffs(self) -> np.ndarray:
        if self.exact:
            return np.array([abs(float(v)) for v in self.coeffs])
        return np.abs(self.coeffs)


@dataclass(frozen=True)
class GeneralDirichletSeries:
    """Finite truncation of ``sum c_n exp(-lambda_n s)``."""

    exponents: tuple[float, ...]
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.exponents)
        cs = tuple(complex(c) for c in self.coeffs)
        if len(lam) != len(cs):
            raise ValueError("exponents and coefficients differ in length")
        if any(x < 0 for x in lam):
            raise ValueError("exponents must be non-negative")
        if any(b <= a for a, b in zip(lam, lam[1:])):
            raise ValueError("exponents must be strictly increasing")
        object.__setattr__(self, "exponents", lam)
        object.__setattr__(self, "coeffs", cs)

    def __len__(self) -> int:
        return len(self.exponents)

    def evaluate(self, s: complex) -> complex:
        if not self.exponents:
            return 0j
        lam = np.asarray(self.exponents)
        return complex(np.sum(np.asarray(self.coeffs) * np.exp(-complex(s) * lam)))


class DirichletPolynomial(Mapping[int, complex]):
    """Finite Dirichlet polynomial ``sum_u a_u u^{-s}``; zero entries are dropped."""

    def __init__(self, support: Mapping[int, Number] | Iterable[tuple[int, Number]] = ()):
        items = support.items() if isinstance(support, Mapping) else support
        data: dict[int, Number] = {}
        for u, c in items:
            u = int(u)
            if u < 1:
                raise ValueError("Dirichlet polynomial indices must be >= 1")
            if c != 0:
                data[u] = _as_exact(c) if _is_exact_value(c) else complex(c)
        self._data = dict(sorted(data.items()))

    def __getitem__(self, u: int):
        return self._data[u]

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"DirichletPolynomial({self._data!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return self._data == dict(other)
        return NotImplemented

    @property
    def degree(self) -> int:
        return max(self._data, default=0)

    def to_series(self, truncation: int | None = None) -> OrdinaryDirichletSeries:
        m = truncation or max(self.degree, 1)
        if m < self.degree:
            raise TruncationError(f"truncation {m} below polynomial support {self.degree}")
        return OrdinaryDirichletSeries.from_function(
            lambda n: self._data.get(n, 0), m, sigma_a_hint=-math.inf)

    def evaluate(self, s: complex) -> complex:
        return evaluate(self.to_series(), s)[0]

    def to_json(self) -> dict[str, list[float]]:
        return {str(u): [float(complex(c).real), float(complex(c).imag)]
                for u, c in self._data.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, list[float]]) -> "DirichletPolynomial":
        return cls({int(u): complex(re, im) for u, (re, im) in obj.items()})


@dataclass(frozen=True)
class SupportRefuted:
    """Detector outcome: coefficient ``witness`` is non-negligible and ``witness`` does not divide N."""

    witness: int
    value: complex
    checked_up_to: int


def _check_truncation(n_max: int, *series: OrdinaryDirichletSeries) -> None:
    if n_max < 1:
        raise TruncationError("n_max must be positive")
    for s in series:
        if n_max > s.truncation:
            raise TruncationError(f"n_max={n_max} exceeds truncation {s.truncation}")


def _work_arrays(a: OrdinaryDirichletSeries, b: OrdinaryDirichletSeries, n_max: int):
    if a.exact and b.exact:
        return a.coeffs[:n_max], b.coeffs[:n_max], True
    return a.to_float().coeffs[:n_max], b.to_float().coeffs[:n_max], False


def convolve(a: OrdinaryDirichletSeries, b: OrdinaryDirichletSeries,
             n_max: int) -> OrdinaryDirichletSeries:
    """Dirichlet convolution ``c_n = sum_{d | n} a_d b_{n/d}`` for ``n <= n_max``."""
    _check_truncation(n_max, a, b)
    x, y, exact = _work_arrays(a, b, n_max)
    if exact:
        c = np.empty(n_max, dtype=object)
        c[:] = 0
    else:
        c = np.zeros(n_max, dtype=complex)
    for d in range(1, n_max + 1):
        ad = x[d - 1]
        if ad == 0:
            continue
        m = n_max // d
        c[d - 1::d][:m] += ad * y[:m]
    if exact:
        c[:] = [_as_exact(v) for v in c]
    hint = _combine_hints(a.sigma_a_hint, b.sigma_a_hint)
    return OrdinaryDirichletSeries(c, hint)


def _combine_hints(h1, h2):
    if h1 is None or h2 is None:
        return None
    return max(h1, h2)


def divide(a: OrdinaryDirichletSeries, b: OrdinaryDirichletSeries,
           n_max: int) -> OrdinaryDirichletSeries:
    """Coefficients of the quotient ``q`` with ``q * b = a`` (Dirichlet convolution).

    Raises :class:`DivisionUndefinedError` when ``b_1`` vanishes (relative to
    ``max |b_n|`` in floating mode).
    """
    _check_truncation(n_max, a, b)
    x, y, exact = _work_arrays(a, b, n_max)
    b1 = y[0]
    if exact:
        if b1 == 0:
            raise DivisionUndefinedError("leading coefficient b_1 is zero")
    else:
        scale = float(np.max(np.abs(y))) or 1.0
        if abs(b1) <= LEADING_TOL * scale:
            raise DivisionUndefinedError(f"leading coefficient b_1 = {b1} is numerically zero")
    acc = x.copy()
    q = acc  # filled in place; acc[n-1] holds a_n - sum_{d|n, d<n} q_d b_{n/d}
    for n in range(1, n_max + 1):
        qn = _exact_div(acc[n - 1], b1) if exact else acc[n - 1] / b1
        q[n - 1] = qn
        if qn == 0:
            continue
        m = n_max // n
        if m >= 2:
            acc[2 * n - 1::n][:m - 1] -= qn * y[1:m]
    return OrdinaryDirichletSeries(q, None)


def evaluate(a: OrdinaryDirichletSeries, s: complex,
             n_max: int | None = None) -> tuple[complex, float | None]:
    """Partial sum ``sum_{n <= n_max} a_n n^{-s}`` and a bound on the omitted tail.

    The tail bound is ``None`` (unknown) unless either the series is a
    Dirichlet polynomial (``sigma_a_hint == -inf``) or ``Re(s)`` exceeds the
    declared hint ``h``.  In the latter case the coefficients beyond the
    truncation ``M`` are assumed to obey the envelope ``|a_n| <= C n^{h-1}``
    with ``C = max_{n<=M} |a_n| n^{1-h}``, and integral comparison gives

        sum_{n>M} C n^{h-1-sigma} <= C M^{h-sigma} / (sigma - h).
    """
    if isinstance(a, DirichletPolynomial):
        a = a.to_series()
    m = a.truncation if n_max is None else n_max
    _check_truncation(m, a)
    s = complex(s)
    n = np.arange(1, a.truncation + 1, dtype=float)
    if s.imag == 0.0:
        powers = n ** (-s.real) + 0j
    else:
        powers = np.exp(-s * np.log(n))
    coeffs = a.to_float().coeffs
    value = complex(np.sum(coeffs[:m] * powers[:m]))
    sigma = s.real
    known_rest = float(np.sum(np.abs(coeffs[m:]) * np.abs(powers[m:])))
    hint = a.sigma_a_hint
    if hint is not None and hint == -math.inf:
        return value, known_rest
    if hint is None or not sigma > hint:
        return value, None
    absc = np.abs(coeffs)
    env = float(np.max(absc * n ** (1.0 - hint)))
    big_m = float(a.truncation)
    tail = env * big_m ** (hint - sigma) / (sigma - hint)
    return value, known_rest + tail


def detect_support(q: OrdinaryDirichletSeries, N: int,
                   tol: float | None = None) -> DirichletPolynomial | SupportRefuted:
    """Check that ``q`` is supported on the divisors of ``N`` up to its truncation.

    The verdict is "verified up to ``q.truncation``": finite data cannot
    certify the full series.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be a positive integer")
    if q.truncation < N:
        raise InsufficientDataError(f"truncation {q.truncation} < N = {N}")
    if tol is None:
        tol = 0 if q.exact else DEFAULT_TOL
    absq = q.abs_coeffs() if not q.exact else None
    for n in range(1, q.truncation + 1):
        if N % n == 0:
            continue
        mag = abs(q.coeffs[n - 1]) if q.exact else absq[n - 1]
        if mag > tol:
            return SupportRefuted(n, q.coeffs[n - 1], q.truncation)
    support = {}
    for u in divisors(N):
        c = q.coeffs[u - 1]
        if abs(c) > tol:
            support[u] = c
    return DirichletPolynomial(support)


def ods_to_gds(a: OrdinaryDirichletSeries) -> GeneralDirichletSeries:
    """Embed an ODS as a GDS with exponents ``log n`` over the non-zero coefficients."""
    idx = [n for n in range(1, a.truncation + 1) if a.coeffs[n - 1] != 0]
    return GeneralDirichletSeries(tuple(math.log(n) for n in idx),
                                  tuple(complex(a.coeffs[n - 1]) for n in idx))


def abscissa_estimate(a: OrdinaryDirichletSeries) -> float:
    """Empirical growth exponent of ``S(x) = sum_{n<=x} |a_n|``.

    Evaluates ``log(S(2x)/S(x)) / log 2`` at dyadic ``x`` and returns the
    largest value over the upper half of the dyadic range, which removes the
    constant bias of the raw quotient ``log S(x) / log x``.  Advisory only.
    Returns ``-inf`` for the all-zero series.
    """
    if a.truncation < 16:
        raise InsufficientDataError("abscissa_estimate needs truncation >= 16")
    partial = np.cumsum(a.abs_coeffs())
    if partial[-1] == 0:
        return -math.inf
    kmax = int(math.floor(math.log2(a.truncation)))
    slopes = []
    for k in range(max(1, kmax // 2), kmax + 1):
        lo, hi = partial[2 ** (k - 1) - 1], partial[2 ** k - 1]
        if lo > 0:
            slopes.append(math.log(hi / lo) / math.log(2.0))
    if not slopes:
        return 0.0
    return max(slopes)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- serialization ---------------------------------------------------------

def dumps_coefficients(a: OrdinaryDirichletSeries) -> str:
    """Tab-separated ``n re im`` lines, 1-indexed; zero coefficients are omitted."""
    out = io.StringIO()
    out.write(f"# truncation\t{a.truncation}\n")
    for n, c in enumerate(a.coeffs, start=1):
        if c != 0:
            z = complex(c)
            out.write(f"{n}\t{z.real!r}\t{z.imag!r}\n")
    return out.getvalue()


def loads_coefficients(text: str, truncation: int | None = None) -> OrdinaryDirichletSeries:
    entries: dict[int, complex] = {}
    declared = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "truncation":
                declared = int(parts[1])
            continue
        n, re_, im_ = line.split("\t")
        entries[int(n)] = complex(float(re_), float(im_))
    m = truncation or declared or max(entries, default=1)
    return OrdinaryDirichletSeries.from_function(lambda n: entries.get(n, 0j), m, exact=False)


def save_coefficients(a: OrdinaryDirichletSeries, path: str | Path) -> None:
    Path(path).write_text(dumps_coefficients(a), encoding="utf-8")


def load_coefficients(path: str | Path) -> OrdinaryDirichletSeries:
    return loads_coefficients(Path(path).read_text(encoding="utf-8"))


def polynomial_to_json_text(p: DirichletPolynomial) -> str:
    return json.dumps(p.to_json(), sort_keys=True)
