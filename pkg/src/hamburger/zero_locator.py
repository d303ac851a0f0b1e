"""Zeros of completed Dirichlet L-functions.

Two independent procedures:

* ``count_zeros_rectangle``: the argument principle for ``Lambda(s, chi)``
  along the boundary of a rectangle, with adaptive subdivision of the
  boundary until every phase step is small.
* ``critical_line_zeros``: sign changes of the rotated real function
  ``Z(t) = W^(-1/2) exp(i Im log g(1/2 + it)) L(1/2 + it)`` where
  ``g(s) = (q/pi)^((s+a)/2) Gamma((s+a)/2)``.  ``Z`` is real on the
  line and ``|Z(t)| = |L(1/2 + it)|``, which is the residual reported
  for each refined zero.

A zero list is always cross-checked against the rectangle count over
``[-1, 2] x [t_min, t_max]``; a mismatch is reported with
``ZeroFlag.OFF_LINE_OR_MISSED`` and never reconciled silently.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BoundaryTooCloseError, ImprimitiveCharacterError, UnsupportedError
from .lfunction_engine import (
    DirichletCharacter,
    LFunctionDescriptor,
    l_value,
    log_completion_factor,
    root_number,
)

DEFAULT_DELTA = 0.25       # lower ordinate of the search window
SCAN_STEP = 0.05
MAX_PHASE_STEP = math.pi / 4
PHASE_FAIL = math.pi / 2


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    def shifted(self, d_im_min: float = 0.0, d_im_max: float = 0.0) -> "Rectangle":
        return Rectangle(self.re_min, self.re_max, self.im_min + d_im_min, self.im_max + d_im_max)

    def contains(self, s: complex) -> bool:
        return self.re_min < s.real < self.re_max and self.im_min < s.imag < self.im_max


class ZeroFlag(str, Enum):
    OK = "OK"
    OFF_LINE_OR_MISSED = "OFF_LINE_OR_MISSED"


@dataclass(frozen=True)
class ZeroEntry:
    ordinate: float
    multiplicity: int = 1
    refined: bool = True
    residual: float = float("nan")


@dataclass
class ZeroList:
    """Critical-line zeros of one L-function in ``(t_min, t_max]``."""

    label: str
    entries: tuple[ZeroEntry, ...]
    t_min: float
    t_max: float
    rectangle_count: int | None = None
    flag: ZeroFlag = ZeroFlag.OK
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        ords = [e.ordinate for e in self.entries]
        if any(b <= a for a, b in zip(ords, ords[1:])):
            raise ValueError("ordinates must be strictly increasing")

    @property
    def T(self) -> float:
        return self.t_max

    @property
    def ordinates(self) -> np.ndarray:
        return np.array([e.ordinate for e in self.entries])

    @property
    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ordinate", "multiplicity", "residual"])
        for e in self.entries:
            w.writerow([repr(float(e.ordinate)), e.multiplicity, f"{e.residual:.3e}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "", t_min: float = 0.0,
                 t_max: float = math.inf) -> "ZeroList":
        rows = list(csv.DictReader(io.StringIO(text)))
        entries = tuple(ZeroEntry(float(r["ordinate"]), int(r["multiplicity"]), True,
                                  float(r["residual"])) for r in rows)
        return cls(label, entries, t_min, t_max)

    def summary(self) -> dict:
        return {
            "label": self.label,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "count": self.total_multiplicity,
            "rectangle_count": self.rectangle_count,
            "flag": self.flag.value,
        }


# -- the completed function -------------------------------------------------

def _character(L: LFunctionDescriptor | DirichletCharacter) -> DirichletCharacter:
    chi = L.character if isinstance(L, LFunctionDescriptor) else L
    if chi is None:
        raise UnsupportedError("zero location needs a Dirichlet character")
    if not chi.primitive:
        raise ImprimitiveCharacterError(f"{chi.label} is imprimitive")
    if chi.is_principal and chi.modulus != 1:
        raise UnsupportedError("principal characters other than zeta are not supported")
    return chi


def _log_lambda_parts(chi: DirichletCharacter, s: np.ndarray):
    """``(log g(s), L(s))`` with ``Lambda = exp(log g) * L``."""
    return log_completion_factor(chi.modulus, chi.parity, s), l_value(chi, s)


def rotated_z(L: LFunctionDescriptor | DirichletCharacter, t) -> np.ndarray:
    """Real-valued ``Z(t)`` on the critical line (``|Z| = |L(1/2 + it)|``)."""
    chi = _character(L)
    t = np.asarray(t, dtype=float)
    s = 0.5 + 1j * t
    logg, lv = _log_lambda_parts(chi, s)
    omega = np.angle(root_number(chi))
    z = np.exp(1j * (logg.imag - omega / 2)) * lv
    return z.real


def _phase_increments(chi: DirichletCharacter, pts: np.ndarray):
    logg, lv = _log_lambda_parts(chi, pts)
    if np.any(lv == 0):
        raise BoundaryTooCloseError("L vanishes on the contour")
    dlog = np.diff(logg.imag) + np.angle(lv[1:] / lv[:-1])
    return (dlog + math.pi) % (2 * math.pi) - math.pi


def _boundary(rect: Rectangle, step: float) -> np.ndarray:
    corners = [complex(rect.re_min, rect.im_min), complex(rect.re_max, rect.im_min),
               complex(rect.re_max, rect.im_max), complex(rect.re_min, rect.im_max)]
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        n = max(4, int(math.ceil(abs(b - a) / step)))
        pts.append(a + (b - a) * np.arange(n) / n)
    pts.append(np.array([corners[0]]))
    return np.concatenate(pts)


def count_zeros_rectangle(L: LFunctionDescriptor | DirichletCharacter, rect: Rectangle,
                          *, step: float = 0.05, max_depth: int = 14) -> int:
    """Zeros of ``Lambda`` inside ``rect`` (with multiplicity), by the argument principle.

    Boundary segments whose phase step exceeds pi/4 are halved, up to
    ``max_depth`` times; a remaining step of at least pi/2 raises
    :class:`BoundaryTooCloseError`.
    """
    chi = _character(L)
    pts = _boundary(rect, step)
    inc = _phase_increments(chi, pts)
    for _ in range(max_depth):
        bad = np.abs(inc) >= MAX_PHASE_STEP
        if not np.any(bad):
            break
        mids = 0.5 * (pts[:-1][bad] + pts[1:][bad])
        idx = np.flatnonzero(bad) + 1
        pts = np.insert(pts, idx, mids)
        inc = _phase_increments(chi, pts)
    if np.any(np.abs(inc) >= PHASE_FAIL):
        k = int(np.argmax(np.abs(inc)))
        raise BoundaryTooCloseError(f"phase step {inc[k]:.3f} near s = {pts[k]:.6g}")
    winding = float(np.sum(inc)) / (2 * math.pi)
    n = round(winding)
    if abs(winding - n) > 0.05:
        raise BoundaryTooCloseError(f"non-integral winding {winding:.4f}")
    return int(n)


def count_with_retries(L, rect: Rectangle, *, retries: int = 5,
                       nudge: float = 0.01) -> tuple[int, Rectangle]:
    """``count_zeros_rectangle`` with horizontal edges nudged by +-0.01 on failure."""
    shifts = [0.0]
    for k in range(1, retries + 1):
        shifts.append(k * nudge if k % 2 else -k * nudge)
    last = None
    for d in shifts:
        r = rect.shifted(d, d) if d else rect
        try:
            return count_zeros_rectangle(L, r), r
        except BoundaryTooCloseError as exc:
            last = exc
    raise BoundaryTooCloseError(f"{last} (after {retries} perturbations)")


# -- critical-line scan -----------------------------------------------------

def _scan(chi, t_min: float, t_max: float, step: float) -> list[float]:
    n = max(1, int(math.ceil((t_max - t_min) / step)))
    grid = t_min + step * np.arange(n + 1)
    grid[-1] = min(grid[-1], t_max)
    if grid[-1] <= grid[-2]:
        grid = grid[:-1]
    z = rotated_z(chi, grid)
    roots = []
    f = lambda t: float(rotated_z(chi, t))
    for i in range(len(grid) - 1):
        za, zb = z[i], z[i + 1]
        if za == 0.0 and i > 0:
            roots.append(float(grid[i]))
        elif za * zb < 0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-10, rtol=4 * np.finfo(float).eps))
    return roots


def _local_multiplicity(chi, t: float, radius: float) -> int:
    rect = Rectangle(0.5 - radius, 0.5 + radius, t - radius, t + radius)
    try:
        return count_zeros_rectangle(chi, rect, step=radius / 8)
    except BoundaryTooCloseError:
        return 1


def zeros_in_window(L: LFunctionDescriptor | DirichletCharacter, t_min: float, t_max: float,
                    *, step: float = SCAN_STEP, refinements: int = 2) -> ZeroList:
    """Critical-line zeros with ordinate in ``[t_min, t_max]``, cross-checked by a rectangle count."""
    chi = _character(L)
    label = "zeta" if chi.modulus == 1 else chi.label
    count, rect = count_with_retries(chi, Rectangle(-1.0, 2.0, t_min, t_max))
    t_lo, t_hi = rect.im_min, rect.im_max
    h = step
    roots = _scan(chi, t_lo, t_hi, h)
    for _ in range(refinements):
        if len(roots) == count:
            break
        h /= 4
        roots = _scan(chi, t_lo, t_hi, h)
    mult = [1] * len(roots)
    diagnostics: dict = {"scan_step": h, "rectangle": [rect.re_min, rect.re_max, t_lo, t_hi]}
    if len(roots) < count and roots:
        # a zero of even multiplicity gives no sign change; attribute via local counts
        for i, t in enumerate(roots):
            gaps = [abs(t - u) for u in (roots[i - 1] if i else None,
                                         roots[i + 1] if i + 1 < len(roots) else None)
                    if u is not None]
            radius = min([0.05] + [g / 3 for g in gaps])
            mult[i] = max(1, _local_multiplicity(chi, t, radius))
    total = sum(mult)
    flag = ZeroFlag.OK if total == count else ZeroFlag.OFF_LINE_OR_MISSED
    if flag is not ZeroFlag.OK:
        diagnostics["critical_line_count"] = total
    residual = np.abs(l_value(chi, 0.5 + 1j * np.array(roots))) if roots else []
    entries = tuple(ZeroEntry(float(t), m, True, float(r))
                    for t, m, r in zip(roots, mult, residual))
    return ZeroList(label, entries, t_lo, t_hi, count, flag, diagnostics)


def critical_line_zeros(L: LFunctionDescriptor | DirichletCharacter, T: float,
                        *, delta: float = DEFAULT_DELTA, step: float = SCAN_STEP) -> ZeroList:
    """Zeros ``1/2 + it`` with ``delta <= t <= T``."""
    if T <= 0:
        raise ValueError("T must be positive")
    if T <= delta:
        chi = _character(L)
        return ZeroList("zeta" if chi.modulus == 1 else chi.label, (), 0.0, T, 0)
    return zeros_in_window(L, delta, T, step=step)


# -- multiset comparison ----------------------------------------------------

@dataclass
class ZeroComparison:
    matched: list[tuple[float, float]]
    only_in_1: list[float]
    only_in_2: list[float]
    certified: list[bool]
    ambiguities: list[dict]
    tol: float

    @property
    def certified_witnesses(self) -> list[float]:
        return [t for t, ok in zip(self.only_in_2, self.certified) if ok]

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "matched": [list(p) for p in self.matched],
            "only_in_1": self.only_in_1,
            "only_in_2": self.only_in_2,
            "certified_pole_witnesses": self.certified_witnesses,
            "ambiguities": self.ambiguities,
        }


def _expand(z: ZeroList | Sequence[float]) -> list[float]:
    if isinstance(z, ZeroList):
        return [e.ordinate for e in z.entries for _ in range(e.multiplicity)]
    return sorted(float(t) for t in z)


def compare_zero_multisets(z1: ZeroList | Sequence[float], z2: ZeroList | Sequence[float],
                           tol: float,
                           recheck: Callable[[float], tuple[float, float]] | None = None
                           ) -> ZeroComparison:
    """Greedy ordinate-ordered matching of two zero multisets within ``tol``.

    ``recheck(t)`` should return ``(|L1|, |L1'|)`` at ``1/2 + it``; an entry
    of ``only_in_2`` is a certified pole witness of ``L1/L2`` when
    ``|L1| > 10 tol max(1, |L1'|)``.  Without ``recheck`` nothing is certified.
    """
    if isinstance(z1, ZeroList) and isinstance(z2, ZeroList) and z1.t_max != z2.t_max:
        raise ValueError("zero lists must share the height bound")
    a, b = _expand(z1), _expand(z2)
    used = [False] * len(b)
    matched, only1, ambiguities = [], [], []
    for t in a:
        cand = [j for j, u in enumerate(b) if not used[j] and abs(u - t) <= tol]
        local = tol
        while len(cand) > 1 and local > tol * 1e-3:
            local /= 10
            ambiguities.append({"ordinate": t, "candidates": [b[j] for j in cand], "tol": local})
            narrower = [j for j in cand if abs(b[j] - t) <= local]
            if not narrower:
                break
            cand = narrower
        if cand:
            j = min(cand, key=lambda j: (abs(b[j] - t), j))
            used[j] = True
            matched.append((t, b[j]))
        else:
            only1.append(t)
    only2 = [u for j, u in enumerate(b) if not used[j]]
    certified = []
    for u in only2:
        if recheck is None:
            certified.append(False)
            continue
        val, deriv = recheck(u)
        certified.append(bool(val > 10 * tol * max(1.0, deriv)))
    return ZeroComparison(matched, only1, only2, certified, ambiguities, tol)


def pole_witness_recheck(L1: LFunctionDescriptor | DirichletCharacter,
                         h: float = 1e-5) -> Callable[[float], tuple[float, float]]:
    """``t -> (|L1(1/2+it)|, |d/dt L1(1/2+it)|)`` for :func:`compare_zero_multisets`."""
    chi = L1.character if isinstance(L1, LFunctionDescriptor) else L1

    def recheck(t: float) -> tuple[float, float]:
        s = 0.5 + 1j * np.array([t - h, t, t + h])
        v = l_value(chi, s)
        return float(abs(v[1])), float(abs(v[2] - v[0]) / (2 * h))

    return recheck


def plot_data_csv(lists: Sequence[ZeroList]) -> str:
    """Long-format scatter data: one ``label,ordinate,multiplicity`` row per zero."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "ordinate", "multiplicity"])
    for z in lists:
        for e in z.entries:
            w.writerow([z.label, repr(float(e.ordinate)), e.multiplicity])
    return buf.getvalue()
