"""Hamburger-type test for two L-functions sharing a gamma factor.

If ``L_i(k - s) = N_i^s gamma(s) L_i*(s)`` for ``i = 1, 2`` and the ratios
are ordinary Dirichlet series, then ``L1 = P L2`` with ``P`` a Dirichlet
polynomial supported on the divisors of the integer ``N = N1/N2``.  The
tester checks instances of this implication on truncated data; it reports
"consistent up to M", never a proof.

Coefficient-level dual check
----------------------------
With ``rho = L1/L2 = sum q_u u^-s`` and ``r = L1*/L2* = sum r_v v^-s`` the
equations give ``rho(k - s) = N^s r(s)``, i.e. ``r_v = q_{N/v} (N/v)^-k``.
After the half-weight shift ``a'_u = q_u u^(-k/2)`` and
``b'_v = N^(k/2) r_v v^(-k/2)`` this is the symmetric statement
``b'_v = a'_{N/v}``, which is what :func:`dual_polynomial_check` tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .dirichlet_algebra import (
    DEFAULT_TOL,
    DirichletPolynomial,
    SupportRefuted,
    convolve,
    detect_support,
    divide,
)
from .lfunction_engine import DirichletCharacter, LFunctionDescriptor, to_level_form
from .zero_locator import (
    ZeroComparison,
    ZeroFlag,
    ZeroList,
    compare_zero_multisets,
    critical_line_zeros,
    pole_witness_recheck,
)

UNVERIFIED_HYPOTHESES = (
    "L1*/L2* is an ordinary Dirichlet series (coefficients are computed, convergence is not proved)",
    "finite order in vertical strips (not checkable from coefficients)",
)
RESIDUAL_FACTOR = 10.0
SAFE_SIGMA = 2.0


class Status(str, Enum):
    VERIFIED = "VERIFIED"
    REFUTED = "REFUTED"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class Applicability:
    ok: bool
    reason: str = ""
    N: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_applicability(L1: LFunctionDescriptor, L2: LFunctionDescriptor) -> Applicability:
    """Shared gamma factor and weight; poles are finite by construction of descriptors."""
    if L1.gamma != L2.gamma:
        return Applicability(False, f"gamma mismatch: {L1.gamma.to_json()} vs {L2.gamma.to_json()}")
    if L1.weight != L2.weight:
        return Applicability(False, f"weight mismatch: {L1.weight} vs {L2.weight}")
    return Applicability(True, "", Fraction(L1.conductor) / Fraction(L2.conductor))


@dataclass
class HamburgerVerdict:
    status: Status
    N: Fraction | None
    checked_up_to: int
    polynomial: DirichletPolynomial | None = None
    witness: dict | None = None
    reason: str = ""
    detector_only: bool = False
    pointwise_residual: float | None = None
    hypotheses_unverified: tuple[str, ...] = UNVERIFIED_HYPOTHESES

    @property
    def summary(self) -> str:
        if self.status is Status.VERIFIED:
            return f"consistent with L1 = P L2 up to n = {self.checked_up_to}"
        if self.status is Status.REFUTED:
            return ("L1/L2 is not a Dirichlet polynomial on the divisors of N, so either the "
                    "conclusion or an unverified hypothesis fails")
        return f"inapplicable: {self.reason}"

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "N": None if self.N is None else [self.N.numerator, self.N.denominator],
            "polynomial": None if self.polynomial is None else self.polynomial.to_json(),
            "witness": self.witness,
            "checked_up_to": self.checked_up_to,
            "reason": self.reason,
            "detector_only": self.detector_only,
            "pointwise_residual": self.pointwise_residual,
            "summary": self.summary,
            "hypotheses_unverified": list(self.hypotheses_unverified),
        }


def _as_json_number(v) -> list[float]:
    c = complex(v)
    return [c.real, c.imag]


def _ratio_series(L1: LFunctionDescriptor, L2: LFunctionDescriptor, n_max: int):
    a1, a2 = L1.coefficients(n_max), L2.coefficients(n_max)
    return a1, a2, divide(a1, a2, n_max)


def ratio_polynomial_test(L1: LFunctionDescriptor, L2: LFunctionDescriptor, n_max: int = 256,
                          tol: float | None = None, *, N: int | Fraction | None = None
                          ) -> HamburgerVerdict:
    """Test ``L1 = P L2`` with ``P`` supported on the divisors of ``N = N1/N2``.

    ``N`` may be supplied to bypass the functional-equation levels; the verdict
    is then marked ``detector_only``.
    """
    app = check_applicability(L1, L2)
    if not app:
        return HamburgerVerdict(Status.INAPPLICABLE, None, n_max, reason=app.reason)
    detector_only = N is not None
    N = Fraction(N) if detector_only else app.N
    a1, a2, q = _ratio_series(L1, L2, n_max)
    if tol is None:
        tol = 0 if q.exact else DEFAULT_TOL

    if N.denominator != 1:
        # the divisor space of a non-integral level is {0}, but L1 is not zero
        coeffs = q.coeffs if q.exact else q.abs_coeffs()
        n = next((i + 1 for i, c in enumerate(coeffs) if abs(c) > tol), None)
        witness = None if n is None else {"kind": "coefficient", "index": n,
                                           "value": _as_json_number(q.coeffs[n - 1]),
                                           "rule": "non-integral N"}
        return HamburgerVerdict(Status.REFUTED, N, n_max, witness=witness,
                                detector_only=detector_only)

    found = detect_support(q, int(N), tol)
    if isinstance(found, SupportRefuted):
        witness = {"kind": "coefficient", "index": found.witness,
                   "value": _as_json_number(found.value), "rule": "off-support coefficient"}
        return HamburgerVerdict(Status.REFUTED, N, n_max, witness=witness,
                                detector_only=detector_only)

    # pointwise check in the region of absolute convergence
    t = np.linspace(-20.0, 25.0, 10)
    s = SAFE_SIGMA + 1j * t
    poly = found
    p_vals = sum(complex(c) * np.exp(-s * math.log(u)) for u, c in poly.items())
    resid = float(np.max(np.abs(L1.value(s) - p_vals * L2.value(s))))
    limit = RESIDUAL_FACTOR * (tol or DEFAULT_TOL)
    if resid > limit:
        k = int(np.argmax(np.abs(L1.value(s) - p_vals * L2.value(s))))
        witness = {"kind": "pointwise", "s": _as_json_number(s[k]), "residual": resid}
        return HamburgerVerdict(Status.REFUTED, N, n_max, witness=witness,
                                detector_only=detector_only, pointwise_residual=resid)
    return HamburgerVerdict(Status.VERIFIED, N, n_max, polynomial=poly,
                            detector_only=detector_only, pointwise_residual=resid)


def reconstruction_residual(verdict: HamburgerVerdict, L1: LFunctionDescriptor,
                            L2: LFunctionDescriptor) -> float:
    """``max_n |a1_n - (P * a2)_n|`` up to ``checked_up_to``."""
    m = verdict.checked_up_to
    p = verdict.polynomial.to_series(m)
    back = convolve(p, L2.coefficients(m), m).to_float().coeffs
    return float(np.max(np.abs(L1.coefficients(m).to_float().coeffs - back)))


@dataclass
class DualCheck:
    passed: bool
    failing_index: int | None
    max_deviation: float
    expected: dict[int, list[float]]
    observed: dict[int, list[float]]

    def to_json(self) -> dict:
        return {"passed": self.passed, "failing_index": self.failing_index,
                "max_deviation": self.max_deviation, "expected": self.expected,
                "observed": self.observed}


def dual_polynomial_check(verdict: HamburgerVerdict, L1: LFunctionDescriptor,
                          L2: LFunctionDescriptor, n_max: int | None = None,
                          tol: float = DEFAULT_TOL) -> DualCheck:
    """Check ``N^(k/2) r_v v^(-k/2) = a_{N/v} (N/v)^(-k/2)`` with ``r`` the dual ratio."""
    if verdict.status is not Status.VERIFIED:
        raise ValueError("dual check needs a VERIFIED verdict")
    N = int(verdict.N)
    n_max = n_max or verdict.checked_up_to
    k = float(L1.weight)
    r = divide(L1.dual_coefficients(n_max), L2.dual_coefficients(n_max), n_max).to_float().coeffs
    v = np.arange(1, n_max + 1, dtype=float)
    observed = N ** (k / 2) * r * v ** (-k / 2)
    expected = np.zeros(n_max, dtype=complex)
    for u, c in verdict.polynomial.items():
        if N % u == 0 and N // u <= n_max:
            expected[N // u - 1] = complex(c) * u ** (-k / 2)
    dev = np.abs(observed - expected)
    bad = np.flatnonzero(dev > tol)
    divs = [d for d in range(1, min(N, n_max) + 1) if N % d == 0]
    return DualCheck(
        passed=bad.size == 0,
        failing_index=int(bad[0]) + 1 if bad.size else None,
        max_deviation=float(dev.max()),
        expected={d: _as_json_number(expected[d - 1]) for d in divs},
        observed={d: _as_json_number(observed[d - 1]) for d in divs},
    )


@dataclass
class PoleExperimentReport:
    status: Status
    reason: str = ""
    verdict: HamburgerVerdict | None = None
    zeros_1: ZeroList | None = None
    zeros_2: ZeroList | None = None
    comparison: ZeroComparison | None = None

    @property
    def integrity_ok(self) -> bool:
        return all(z is None or z.flag is ZeroFlag.OK for z in (self.zeros_1, self.zeros_2))

    def to_json(self) -> dict:
        out = {"status": self.status.value, "reason": self.reason,
               "verdict": None if self.verdict is None else self.verdict.to_json()}
        if self.comparison is not None:
            out["zero_comparison"] = {
                **self.comparison.to_json(),
                "zeros_1": self.zeros_1.summary(),
                "zeros_2": self.zeros_2.summary(),
                "unmatched_1": len(self.comparison.only_in_1),
                "unmatched_2": len(self.comparison.only_in_2),
            }
        else:
            out["zero_comparison"] = None
        return out


def pole_experiment(chi: DirichletCharacter, phi: DirichletCharacter, T: float,
                          tol: float = 1e-4, n_max: int = 64) -> PoleExperimentReport:
    """Coefficient refutation plus zero comparison for two primitive characters.

    Zeros of ``L(., phi)`` that are not zeros of ``L(., chi)`` are poles of
    ``L(., chi) / L(., phi)``; each is re-checked by evaluating ``L(., chi)``.
    """
    if chi == phi:
        return PoleExperimentReport(Status.INAPPLICABLE, "characters equal")
    for c in (chi, phi):
        if not c.primitive:
            return PoleExperimentReport(Status.INAPPLICABLE, f"{c.label} is imprimitive")
    L1, _ = to_level_form(chi)
    L2, _ = to_level_form(phi)
    app = check_applicability(L1, L2)
    if not app:
        return PoleExperimentReport(Status.INAPPLICABLE, app.reason)
    verdict = ratio_polynomial_test(L1, L2, n_max)
    z1 = critical_line_zeros(L1, T)
    z2 = critical_line_zeros(L2, T)
    comp = compare_zero_multisets(z1, z2, tol, recheck=pole_witness_recheck(L1))
    return PoleExperimentReport(verdict.status, "", verdict, z1, z2, comp)
