"""Dirichlet characters, their L-functions and functional equations.

Character values are stored exactly, as the angle of ``chi(a)`` in units of a
full turn (a :class:`~fractions.Fraction` in ``[0, 1)``, ``None`` for
residues not coprime to the modulus).

Canonical ordering
------------------
``(Z/qZ)^*`` is split over the prime powers ``p^k || q`` in increasing
``p``.  An odd prime power contributes one cyclic factor generated by the
least primitive root; ``4`` contributes ``<-1>``; ``2^k`` (``k >= 3``)
contributes ``<-1>`` then ``<5>``.  A character is the exponent vector
``(e_1, .., e_r)`` with ``chi(g_j) = exp(2 pi i e_j / n_j)`` and its index is
the mixed-radix number with the last factor varying fastest, so index 0 is
the principal character.  Selectors ``"q.i"`` refer to this index.

Functional equation in the form ``L(k - s) = N^s gamma(s) L*(s)``
-----------------------------------------------------------------
For primitive ``chi`` mod ``q`` with parity ``a`` and root number
``W = tau(chi) / (i^a sqrt(q))``::

    L(1 - s, chi) = q^s * gamma_a(s) * (W / sqrt(q)) * L(s, conj chi)
    gamma_a(s)    = pi^(1/2 - s) Gamma((s + a)/2) / Gamma((1 - s + a)/2)

so ``k = 1``, ``N = q`` and ``gamma`` depends on the parity only.  A character
induced from a primitive ``chi*`` mod ``f`` picks up the Euler factors
``prod_p (1 - chi*(p) p^-s)`` over primes ``p | q``, ``p`` not dividing ``f``; since
``1 - c p^(s-1) = p^s (p^-s - c/p)`` the same shape holds with
``N = f * prod p`` and ``L* = (W*/sqrt f) prod_p (p^-s - chi*(p)/p) L(s, conj chi*)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Number
from typing import Callable

import numpy as np
from scipy.special import digamma

from .dirichlet_algebra import OrdinaryDirichletSeries
from .errors import ImprimitiveCharacterError, PoleError, SelectorError, UnsupportedError
from .special import hurwitz_zeta, loggamma

_EXACT_UNIT = {Fraction(0): 1, Fraction(1, 2): -1, Fraction(1, 4): 1j, Fraction(3, 4): -1j}


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _mult_order(g: int, m: int) -> int:
    x, k = g % m, 1
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _phi(n: int) -> int:
    out = n
    for p, _ in _factorize(n):
        out = out // p * (p - 1)
    return out


@lru_cache(maxsize=None)
def _unit_group(q: int):
    """Generators (lifted mod q), their orders, and a discrete-log table ``n -> exponents``."""
    gens: list[int] = []
    orders: list[int] = []
    local_tables = []
    for p, k in _factorize(q):
        pk = p ** k
        rest = q // pk
        if p == 2:
            local = [] if k == 1 else ([(pk - 1, 2)] if k == 2 else [(pk - 1, 2), (5, 2 ** (k - 2))])
        else:
            phi = pk // p * (p - 1)
            g = next(g for g in range(2, pk) if math.gcd(g, p) == 1 and _mult_order(g, pk) == phi)
            local = [(g, phi)]
        table = {1 % pk: (0,) * len(local)}
        if local:
            table = {}
            ranges = [range(o) for _, o in local]
            for exps in _product(ranges):
                val = 1
                for (g, _), e in zip(local, exps):
                    val = val * pow(g, e, pk) % pk
                table[val] = exps
        for g, o in local:
            # CRT lift: g mod p^k, 1 mod the rest
            lift = g if rest == 1 else (g * rest * pow(rest, -1, pk) + pk * pow(pk, -1, rest)) % q
            gens.append(lift)
            orders.append(o)
        local_tables.append((pk, table))
    logs = {}
    for n in range(q):
        if math.gcd(n, q) != 1:
            continue
        exps: tuple[int, ...] = ()
        for pk, table in local_tables:
            exps += table[n % pk]
        logs[n] = exps
    return tuple(gens), tuple(orders), logs


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


@dataclass(frozen=True)
class DirichletCharacter:
    """Dirichlet character mod ``modulus`` given by its exact angle table."""

    modulus: int
    angles: tuple[Fraction | None, ...]
    index: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.angles) != self.modulus:
            raise ValueError("angle table must have one entry per residue")

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}" if self.index is not None else f"{self.modulus}.?"

    def angle(self, n: int) -> Fraction | None:
        return self.angles[n % self.modulus]

    def __call__(self, n: int) -> complex:
        ang = self.angle(n)
        if ang is None:
            return 0j
        if ang in _EXACT_UNIT:
            return complex(_EXACT_UNIT[ang])
        return cmath.exp(2j * math.pi * ang)

    def exact_value(self, n: int) -> int | None:
        """``chi(n)`` as an ``int`` for real characters; ``None`` when not integral."""
        ang = self.angle(n)
        if ang is None:
            return 0
        if ang == 0:
            return 1
        if ang == Fraction(1, 2):
            return -1
        return None

    @cached_property
    def is_real(self) -> bool:
        return all(a is None or a in (0, Fraction(1, 2)) for a in self.angles)

    @cached_property
    def is_principal(self) -> bool:
        return all(a is None or a == 0 for a in self.angles)

    @cached_property
    def parity(self) -> int:
        return 0 if self.angle(-1) == 0 else 1

    @cached_property
    def conductor(self) -> int:
        q = self.modulus
        for f in sorted(d for d in range(1, q + 1) if q % d == 0):
            if all(self.angles[n] == 0 for n in range(1, q, f) if math.gcd(n, q) == 1):
                return f
        return q

    @property
    def primitive(self) -> bool:
        return self.conductor == self.modulus

    def values(self) -> np.ndarray:
        return np.array([self(a) for a in range(self.modulus)])

    def conjugate(self) -> "DirichletCharacter":
        angles = tuple(None if a is None else (-a) % 1 for a in self.angles)
        return _with_index(DirichletCharacter(self.modulus, angles))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "modulus": self.modulus,
            "values": [None if a is None else f"{a.numerator}/{a.denominator}"
                       for a in self.angles],
            "parity": self.parity,
            "conductor": self.conductor,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletCharacter":
        angles = tuple(None if v is None else Fraction(v) for v in obj["values"])
        return _with_index(cls(int(obj["modulus"]), angles))


def _with_index(chi: DirichletCharacter) -> DirichletCharacter:
    for c in characters_mod(chi.modulus):
        if c.angles == chi.angles:
            return c
    raise ValueError("angle table is not a character")


@lru_cache(maxsize=None)
def _characters_mod(q: int) -> tuple[DirichletCharacter, ...]:
    gens, orders, logs = _unit_group(q)
    chars = []
    for idx, exps in enumerate(_product([range(o) for o in orders])):
        angles: list[Fraction | None] = [None] * q
        for n, lg in logs.items():
            angles[n] = sum((Fraction(e * l, o) for e, l, o in zip(exps, lg, orders)),
                            Fraction(0)) % 1
        chars.append(DirichletCharacter(q, tuple(angles), idx))
    return tuple(chars)


def characters_mod(q: int) -> list[DirichletCharacter]:
    """All ``phi(q)`` characters mod ``q`` in canonical order (index 0 principal)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    return list(_characters_mod(q))


def conductor_and_primitivize(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    """Conductor ``f`` and the primitive character mod ``f`` inducing ``chi``."""
    f = chi.conductor
    q = chi.modulus
    angles: list[Fraction | None] = [None] * f
    for r in range(f):
        if math.gcd(r, f) != 1:
            continue
        n = next(n for n in range(r, r + f * q + 1, f) if math.gcd(n, q) == 1)
        angles[r] = chi.angles[n % q]
    return f, _with_index(DirichletCharacter(f, tuple(angles)))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """``tau(chi) = sum_a chi(a) exp(2 pi i a / q)``; primitive characters only."""
    if not chi.primitive:
        raise ImprimitiveCharacterError(f"{chi.label} is imprimitive (conductor {chi.conductor})")
    q = chi.modulus
    return complex(sum(chi(a) * cmath.exp(2j * math.pi * a / q) for a in range(q)))


def root_number(chi: DirichletCharacter) -> complex:
    """``W(chi) = tau(chi) / (i^a sqrt q)``."""
    return gauss_sum(chi) / ((1j ** chi.parity) * math.sqrt(chi.modulus))


def l_value(chi: DirichletCharacter, s, *, return_bound: bool = False):
    """``L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)``, valid on all of C (pole at 1 if principal)."""
    q = chi.modulus
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    at_one = (s_arr.real == 1.0) & (s_arr.imag == 0.0)
    if chi.is_principal and np.any(at_one):
        raise PoleError("principal L-function has a pole at s = 1")
    res = [a for a in range(1, q + 1) if chi.angle(a) is not None]
    x = np.array([a / q for a in res])
    weights = np.array([chi(a) for a in res])
    s_safe = np.where(at_one, 2.0, s_arr)
    hz, bound = hurwitz_zeta(s_safe[:, None], x[None, :], return_bound=True)
    scale = np.exp(-s_safe * math.log(q))
    val = scale * (hz @ weights)
    tail = np.abs(scale) * np.max(bound, axis=-1) * len(res)
    if np.any(at_one):
        # the poles cancel since sum chi(a) = 0; zeta(s, x) - 1/(s-1) -> -digamma(x)
        val[at_one] = -(digamma(x) @ weights) / q
        tail[at_one] = 1e-15 * len(res)
    if scalar:
        val, tail = complex(val[0]), float(tail[0])
    if return_bound:
        return val, tail
    return val


def gamma_factor(parity: int, s):
    """``pi^(1/2 - s) Gamma((s+a)/2) / Gamma((1-s+a)/2)``."""
    s = np.asarray(s, dtype=complex)
    return np.exp((0.5 - s) * math.log(math.pi) + loggamma((s + parity) / 2)
                  - loggamma((1 - s + parity) / 2))


def log_completion_factor(q: int, parity: int, s):
    """log of ``(q/pi)^((s+a)/2) Gamma((s+a)/2)``."""
    s = np.asarray(s, dtype=complex)
    return (s + parity) / 2 * math.log(q / math.pi) + loggamma((s + parity) / 2)


def completed_l(chi: DirichletCharacter, s):
    """``Lambda(s, chi) = (q/pi)^((s+a)/2) Gamma((s+a)/2) L(s, chi)`` for primitive non-principal chi."""
    if chi.is_principal:
        raise UnsupportedError("the principal completed L-function has poles")
    if not chi.primitive:
        raise ImprimitiveCharacterError(f"{chi.label} is imprimitive")
    return np.exp(log_completion_factor(chi.modulus, chi.parity, s)) * l_value(chi, s)


def functional_equation_residual(chi: DirichletCharacter, s) -> float:
    """``|Lambda(s, chi) - W(chi) Lambda(1 - s, conj chi)|``."""
    w = root_number(chi)
    lhs = completed_l(chi, s)
    rhs = w * completed_l(chi.conjugate(), 1 - np.asarray(s, dtype=complex))
    return float(np.max(np.abs(lhs - rhs)))


# -- descriptors in level form ---------------------------------------------

@dataclass(frozen=True)
class GammaDescriptor:
    """Shared gamma factor; two descriptors satisfy "same gamma" iff these compare equal."""

    family: str
    parity: int

    def __call__(self, s):
        if self.family != "dirichlet":
            raise UnsupportedError(self.family)
        return gamma_factor(self.parity, s)

    def to_json(self) -> dict:
        return {"family": self.family, "parity": self.parity}


@dataclass(frozen=True)
class FunctionalEquationForm:
    N: Fraction
    gamma: GammaDescriptor
    k: Fraction

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError("N must be positive")


@dataclass(frozen=True)
class LFunctionDescriptor:
    """An L-function with ``L(k - s) = N^s gamma(s) L*(s)``."""

    name: str
    coefficient: Callable[[int], Number]
    conductor: Fraction
    weight: Fraction
    gamma: GammaDescriptor
    root_number: complex
    dual_coefficient: Callable[[int], Number]
    poles: tuple[tuple[complex, int], ...]
    value: Callable
    dual_value: Callable
    character: DirichletCharacter | None = None
    exact: bool = False

    def __post_init__(self):
        if abs(abs(self.root_number) - 1) > 1e-12:
            raise ValueError("root number must have modulus 1")

    @property
    def form(self) -> FunctionalEquationForm:
        return FunctionalEquationForm(self.conductor, self.gamma, self.weight)

    def coefficients(self, n_max: int) -> OrdinaryDirichletSeries:
        return OrdinaryDirichletSeries.from_function(self.coefficient, n_max,
                                                     exact=self.exact, sigma_a_hint=1.0)

    def dual_coefficients(self, n_max: int) -> OrdinaryDirichletSeries:
        return OrdinaryDirichletSeries.from_function(self.dual_coefficient, n_max,
                                                     exact=False, sigma_a_hint=1.0)

    def residual(self, s) -> np.ndarray:
        """``|L(k - s) - N^s gamma(s) L*(s)|``."""
        s = np.asarray(s, dtype=complex)
        k = float(self.weight)
        lhs = self.value(k - s)
        rhs = np.exp(s * math.log(float(self.conductor))) * self.gamma(s) * self.dual_value(s)
        return np.abs(lhs - rhs)


def _euler_correction(chi_star: DirichletCharacter, primes: list[int]) -> dict[int, complex]:
    """Coefficients of ``prod_p (p^-s - chi*(p)/p)`` as ``{d: coefficient}``."""
    poly = {1: 1 + 0j}
    for p in primes:
        c = -chi_star(p) / p
        new: dict[int, complex] = {}
        for d, v in poly.items():
            new[d * p] = new.get(d * p, 0) + v
            new[d] = new.get(d, 0) + v * c
        poly = new
    return poly


def to_level_form(chi: DirichletCharacter) -> tuple[LFunctionDescriptor, FunctionalEquationForm]:
    """Descriptor of ``L(s, chi)`` normalised as ``L(1 - s) = N^s gamma_a(s) L*(s)``.

    Imprimitive characters are accepted: their level ``N`` absorbs the
    missing Euler factors (see the module docstring).
    """
    f, chi_star = conductor_and_primitivize(chi)
    w = root_number(chi_star)
    extra = sorted({p for p, _ in _factorize(chi.modulus)} - {p for p, _ in _factorize(f)})
    N = f * math.prod(extra)
    corr = _euler_correction(chi_star, extra)
    const = w / math.sqrt(f)
    star_bar = chi_star.conjugate()

    def dual_coefficient(n: int) -> complex:
        return const * sum(v * star_bar(n // d) for d, v in corr.items() if n % d == 0)

    def dual_value(s):
        s = np.asarray(s, dtype=complex)
        e = sum(v * np.exp(-s * math.log(d)) for d, v in corr.items())
        return const * e * l_value(star_bar, s)

    def value(s):
        return l_value(chi, s)

    exact = chi.is_real
    coefficient = chi.exact_value if exact else chi
    poles = ((1 + 0j, 1),) if chi.is_principal else ()
    desc = LFunctionDescriptor(
        name=_selector_name(chi),
        coefficient=coefficient,
        conductor=Fraction(N),
        weight=Fraction(1),
        gamma=GammaDescriptor("dirichlet", chi.parity),
        root_number=w,
        dual_coefficient=dual_coefficient,
        poles=poles,
        value=value,
        dual_value=dual_value,
        character=chi,
        exact=exact,
    )
    return desc, desc.form


def _selector_name(chi: DirichletCharacter) -> str:
    return "zeta" if chi.modulus == 1 else chi.label


# -- selector registry -----------------------------------------------------

def resolve(selector: str) -> DirichletCharacter:
    """Resolve ``"zeta"``, ``"q.i"``, ``"q.even"`` or ``"q.odd"`` to a character.

    ``q.even`` / ``q.odd`` pick the first primitive non-principal character
    of that parity in canonical order.
    """
    sel = selector.strip().lower()
    if sel == "zeta":
        return characters_mod(1)[0]
    try:
        q_txt, idx_txt = sel.split(".")
        q = int(q_txt)
    except ValueError:
        raise SelectorError(f"bad selector {selector!r}; expected 'q.index'") from None
    if q < 1 or q > 10_000:
        raise SelectorError(f"modulus {q} out of range")
    chars = characters_mod(q)
    if idx_txt in ("even", "odd"):
        want = 0 if idx_txt == "even" else 1
        for c in chars:
            if not c.is_principal and c.primitive and c.parity == want:
                return c
        raise SelectorError(f"no primitive {idx_txt} character mod {q}")
    try:
        idx = int(idx_txt)
    except ValueError:
        raise SelectorError(f"bad index in selector {selector!r}") from None
    if not 0 <= idx < len(chars):
        raise SelectorError(f"index {idx} out of range for modulus {q} ({len(chars)} characters)")
    return chars[idx]


def primitive_characters(max_modulus: int) -> list[DirichletCharacter]:
    """Primitive characters with modulus ``<= max_modulus``, zeta first."""
    out = []
    for q in range(1, max_modulus + 1):
        out.extend(c for c in characters_mod(q) if c.primitive)
    return out
