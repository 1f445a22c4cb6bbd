#!/usr/bin/env python3
"""
CFRAC - PERIODIC CONTINUED FRACTIONS OF REAL QUADRATIC SURDS
============================================================

PURPOSE:
--------
Everything about Q(sqrt D) that comes out of the continued fraction of
-conj(omega_D):

- expand(D)                       u0 and the minimal period (u1, ..., us)
- convergents / semiconvergents   beta_i = s_i + t_i omega_D and
                                  beta_{i,l} = beta_i + l beta_{i+1}
- delta(D, i)                     codifferent elements with
                                  Tr(delta_{i+1} beta_{i,l}) = 1
- quadratic_indecomposables(D)    upper semiconvergents modulo units
- fundamental_unit(D)             epsilon > 1 and its norm
- max_partial_quotient(D)         u = max of the period
- dump_sail(D, periods)           polyline of the quadratic sail

omega_D = sqrt D when D = 2, 3 (mod 4) and (1 + sqrt D)/2 when D = 1 (mod 4).

The expansion is computed with sympy's periodic continued fraction and then
replayed through exact (P + sqrt D)/Q state iteration; the two must agree.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import mpmath
from sympy.ntheory.continued_fraction import continued_fraction_periodic

from field_core import (
    FieldElement,
    Quadratic,
    are_associates,
    is_totally_positive,
    make_field,
    norm,
    numeric_embeddings,
)
from sail_errors import DegenerateInput, IndexOutOfRange

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticSurd:
    """(P + sqrt D) / Q with Q dividing D - P^2."""

    P: int
    Q: int
    D: int

    def floor(self) -> int:
        # sqrt D is irrational, so isqrt(D) gives the same floor
        if self.Q > 0:
            return (self.P + math.isqrt(self.D)) // self.Q
        return -((self.P + math.isqrt(self.D)) // -self.Q) - 1

    def step(self) -> Tuple[int, "QuadraticSurd"]:
        """(partial quotient, complete quotient of the remainder)."""
        a = self.floor()
        P = a * self.Q - self.P
        Q = (self.D - P * P) // self.Q
        return a, QuadraticSurd(P, Q, self.D)


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    D: int
    u0: int
    period: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.period)

    def u(self, i: int) -> int:
        """Partial quotient u_i, i >= 0."""
        if i < 0:
            raise IndexOutOfRange(f"partial quotient index {i} < 0")
        if i == 0:
            return self.u0
        return self.period[(i - 1) % self.s]

    def to_json(self) -> dict:
        return {"D": self.D, "u0": self.u0, "period": list(self.period), "s": self.s}


@dataclass(frozen=True)
class Convergent:
    i: int
    s: int
    t: int
    beta: FieldElement

    def to_json(self) -> dict:
        return {"i": self.i, "s": self.s, "t": self.t, "beta": [str(c) for c in self.beta.coords]}


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------
def _check_radicand(D: int) -> None:
    make_field(Quadratic(D))


def omega(D: int) -> FieldElement:
    field = make_field(Quadratic(D))
    if D % 4 == 1:
        return field.element([Fraction(1, 2), Fraction(1, 2)])
    return field.element([0, 1])


def omega_bar(D: int) -> FieldElement:
    w = omega(D)
    return w.field.element([w.coords[0], -w.coords[1]])


def _starting_surd(D: int) -> QuadraticSurd:
    # -conj(omega_D)
    if D % 4 == 1:
        return QuadraticSurd(-1, 2, D)
    return QuadraticSurd(0, 1, D)


@lru_cache(maxsize=None)
def expand(D: int) -> ContinuedFractionExpansion:
    """Continued fraction of -conj(omega_D) with its minimal period."""
    _check_radicand(D)
    start = _starting_surd(D)
    terms = continued_fraction_periodic(start.P, start.Q, D)
    if not terms or not isinstance(terms[-1], list):
        raise DegenerateInput(f"no periodic expansion returned for D={D}")
    head = [int(t) for t in terms[:-1]]
    period = tuple(int(t) for t in terms[-1])
    if len(head) != 1:
        raise DegenerateInput(f"expansion of -conj(omega_{D}) is not purely periodic after u0: {terms}")
    expansion = ContinuedFractionExpansion(D, head[0], period)
    _replay(expansion, start)
    logger.debug(f"D={D}: u0={expansion.u0}, period={list(period)}")
    return expansion


def _replay(expansion: ContinuedFractionExpansion, start: QuadraticSurd) -> None:
    """Exact surd iteration must reproduce u0 and return to the first periodic state."""
    u0, state = start.step()
    first = state
    seen = []
    for _ in range(expansion.s):
        a, state = state.step()
        seen.append(a)
    if u0 != expansion.u0 or tuple(seen) != expansion.period or state != first:
        raise DegenerateInput(
            f"surd iteration disagrees for D={expansion.D}: u0={u0}, quotients={seen}"
        )
    last = expansion.period[-1]
    expected = 2 * expansion.u0 + (1 if expansion.D % 4 == 1 else 0)
    if last != expected:
        raise DegenerateInput(f"last partial quotient {last} != {expected} for D={expansion.D}")


def max_partial_quotient(D: int) -> int:
    return max(expand(D).period)


# ---------------------------------------------------------------------------
# Convergents
# ---------------------------------------------------------------------------
def convergents(D: int, count: int) -> List[Convergent]:
    """beta_{-1}, beta_0, ..., beta_{count-2} (count entries starting at index -1)."""
    if count < 1:
        return []
    cf = expand(D)
    w = omega(D)
    one = w.field.one()
    out = [Convergent(-1, 1, 0, one)]
    s_prev, t_prev = 1, 0
    s_cur, t_cur = cf.u0, 1
    for i in range(0, count - 1):
        out.append(Convergent(i, s_cur, t_cur, one * s_cur + w * t_cur))
        u_next = cf.u(i + 1)
        s_prev, s_cur = s_cur, u_next * s_cur + s_prev
        t_prev, t_cur = t_cur, u_next * t_cur + t_prev
    return out


def convergent(D: int, i: int) -> Convergent:
    if i < -1:
        raise IndexOutOfRange(f"convergent index {i} < -1")
    return convergents(D, i + 2)[-1]


def semiconvergent(D: int, i: int, l: int) -> FieldElement:
    """beta_{i,l} = beta_i + l beta_{i+1}, 0 <= l <= u_{i+2}."""
    if i < -1:
        raise IndexOutOfRange(f"semiconvergent index {i} < -1")
    cf = expand(D)
    if not 0 <= l <= cf.u(i + 2):
        raise IndexOutOfRange(f"l={l} outside [0, u_{i + 2}={cf.u(i + 2)}]")
    pair = convergents(D, i + 3)
    return pair[-2].beta + pair[-1].beta * l


semiconvergents = semiconvergent


def upper_semiconvergents(D: int, last_i: int) -> List[FieldElement]:
    """beta_{i,l} for odd i in [-1, last_i] and 0 <= l < u_{i+2}."""
    cf = expand(D)
    table = convergents(D, last_i + 3)
    out = []
    for i in range(-1, last_i + 1, 2):
        lo, hi = table[i + 1].beta, table[i + 2].beta
        for l in range(cf.u(i + 2)):
            out.append(lo + hi * l)
    return out


def lower_semiconvergents(D: int, last_i: int) -> List[FieldElement]:
    """beta_{i,l} for even i in [0, last_i] and 0 <= l < u_{i+2}."""
    cf = expand(D)
    table = convergents(D, last_i + 3)
    out = []
    for i in range(0, last_i + 1, 2):
        lo, hi = table[i + 1].beta, table[i + 2].beta
        for l in range(cf.u(i + 2)):
            out.append(lo + hi * l)
    return out


# ---------------------------------------------------------------------------
# Codifferent elements
# ---------------------------------------------------------------------------
def _inverse_sqrt_factor(D: int) -> FieldElement:
    # 1/(2 sqrt D) for D = 2,3 (mod 4), 1/sqrt D for D = 1 (mod 4)
    field = make_field(Quadratic(D))
    scale = Fraction(1, D) if D % 4 == 1 else Fraction(1, 2 * D)
    return field.element([0, scale])


def delta(D: int, i: int) -> FieldElement:
    """delta_i with Tr(delta_{i+1} beta_{i,l}) = 1 and sgn(delta_{i+1}) = sgn(beta_{i,l})."""
    if i < -1:
        raise IndexOutOfRange(f"delta index {i} < -1")
    c = convergent(D, i)
    value = (omega_bar(D) * c.t + c.s) * _inverse_sqrt_factor(D)
    return value if (i + 1) % 2 == 0 else -value


def delta_as_printed(D: int, i: int) -> FieldElement:
    """(-1)^i (t_i conj(omega_D) - s_i) / (2 sqrt D), literal form (also in the codifferent)."""
    c = convergent(D, i)
    value = (omega_bar(D) * c.t - c.s) * _inverse_sqrt_factor(D)
    return value if i % 2 == 0 else -value


# ---------------------------------------------------------------------------
# Units and indecomposables
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def fundamental_unit(D: int) -> Tuple[FieldElement, int]:
    """(epsilon > 1, norm(epsilon)) from the convergent closing the first period."""
    cf = expand(D)
    eps = convergent(D, cf.s - 1).beta
    n = int(norm(eps))
    if n != (-1) ** cf.s:
        raise DegenerateInput(f"unit norm {n} does not match period parity for D={D}")
    return eps, n


def totally_positive_unit(D: int) -> FieldElement:
    """Generator of the totally positive units: epsilon if norm +1, else epsilon^2."""
    eps, n = fundamental_unit(D)
    return eps if n == 1 else eps * eps


def quadratic_indecomposables(D: int) -> List[FieldElement]:
    """Indecomposables of Q(sqrt D), one per class modulo totally positive units."""
    cf = expand(D)
    last_i = cf.s - 3 if cf.s % 2 == 0 else 2 * cf.s - 3
    candidates = upper_semiconvergents(D, last_i)
    conj = [c.field.element([c.coords[0], -c.coords[1]]) for c in candidates]
    reps: List[FieldElement] = []
    for alpha in candidates + conj:
        if not is_totally_positive(alpha):
            continue
        if any(are_associates(alpha, r) for r in reps):
            continue
        reps.append(alpha)
    logger.debug(f"D={D}: {len(reps)} indecomposable classes from {len(candidates)} semiconvergents")
    return reps


def dump_sail(D: int, periods: int = 1) -> List[Tuple[FieldElement, mpmath.mpf, mpmath.mpf]]:
    """Integral points along the upper sail polyline with both embeddings."""
    cf = expand(D)
    last_i = 2 * periods * cf.s - 1
    points = upper_semiconvergents(D, last_i)
    table = convergents(D, last_i + 3)
    points.append(table[last_i + 2].beta)
    out = []
    for p in points:
        x, y = numeric_embeddings(p, 64)
        out.append((p, x, y))
    return out
