#!/usr/bin/env python3
"""
INDECOMP - INDECOMPOSABLE TOTALLY POSITIVE INTEGERS
===================================================

PURPOSE:
--------
Decide indecomposability, count indecomposables modulo totally positive units
(iota) with three strategies, and turn iota into universal-form rank bounds.

STRATEGIES:
----------
- continued_fraction   quadratic fields only, upper semiconvergents (proved)
- bruteforce           log-lattice fundamental domain cover, norm bound doubled
                       until the representative set is stable; the result is
                       labelled "desk-verified up to B"
- sail                 certified sail faces with closed face matching: lattice
                       points on the faces modulo units plus the interior
                       parallelepiped counts

NOTES:
------
is_indecomposable keeps its answers in an LRU cache of
SAILKIT_INDECOMPOSABLE_CACHE entries. Box ends for the brute force cover come
from mpmath interval arithmetic rounded outward.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import iv

import cfrac
import latgeo
import sailconfig
import units
from field_core import (
    Field,
    FieldElement,
    element_to_json,
    is_integral,
    is_totally_positive,
    iter_integral_points_in_box,
    norm,
    numeric_embeddings,
    power,
    upper_enclosure,
    are_associates,
)
from sail_errors import (
    IncompleteSailData,
    NotCertifiable,
    WrongDegree,
    WrongFieldKind,
)

logger = logging.getLogger(__name__)

# log-width of one cell when covering the unit fundamental domain
CELL_WIDTH = 1.0


@dataclass
class IndecomposableSet:
    field: Field
    representatives: List[FieldElement]
    method: str
    unit_domain: str
    status: str
    interior_count: int = 0
    notes: List[str] = dc_field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.representatives) + self.interior_count

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor.to_json(),
            "iota": self.count,
            "method": self.method,
            "unit_domain": self.unit_domain,
            "status": self.status,
            "representatives": [element_to_json(r)["coeffs"] for r in self.representatives],
            "interior_count": self.interior_count,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# Units
# ---------------------------------------------------------------------------
def totally_positive_unit_generators(field: Field) -> List[FieldElement]:
    """n-1 generators of a finite-index subgroup of the totally positive units (the full group here)."""
    if field.kind == "quadratic":
        return [cfrac.totally_positive_unit(field.descriptor.D)]
    if field.kind == "cubic":
        rho = field.rho
        return [rho * rho, (rho + 1) * (rho + 1)]
    return units.totally_positive_unit_generators(field)


def _log_embeddings(alpha: FieldElement, prec: int = 96) -> List[mpmath.mpf]:
    return [mpmath.log(abs(v)) for v in numeric_embeddings(alpha, prec)]


def reduce_modulo_units(alpha: FieldElement, generators: Optional[Sequence[FieldElement]] = None) -> FieldElement:
    """alpha times a totally positive unit, with log coordinates in the fundamental parallelepiped."""
    field = alpha.field
    if field.degree == 1 or alpha.is_zero():
        return alpha
    generators = list(generators) if generators is not None else totally_positive_unit_generators(field)
    m = len(generators)
    logs = _log_embeddings(alpha)
    mean = mpmath.fsum(logs) / len(logs)
    target = [v - mean for v in logs]
    gen_logs = [_log_embeddings(g) for g in generators]
    with mpmath.workprec(96):
        A = mpmath.matrix([[gen_logs[k][i] for k in range(m)] for i in range(m)])
        b = mpmath.matrix([target[i] for i in range(m)])
        coeffs = mpmath.lu_solve(A, b)
    result = alpha
    for g, c in zip(generators, coeffs):
        shift = int(mpmath.floor(c))
        if shift:
            result = result * power(g, -shift)
    return result


# ---------------------------------------------------------------------------
# Indecomposability
# ---------------------------------------------------------------------------
def _small_units(field: Field) -> List[FieldElement]:
    gens = totally_positive_unit_generators(field)
    out = []
    for g in gens:
        out.extend([g, power(g, -1)])
    return out


@lru_cache(maxsize=sailconfig.INDECOMPOSABLE_CACHE_SIZE)
def is_indecomposable(alpha: FieldElement) -> bool:
    """True iff alpha is totally positive integral and no beta >> 0 has alpha - beta >> 0."""
    return _decide_indecomposable(alpha)


def _decide_indecomposable(alpha: FieldElement) -> bool:
    field = alpha.field
    if alpha.is_zero() or not is_integral(alpha) or not is_totally_positive(alpha):
        return False
    # alpha - u >> 0 for a totally positive unit u is an explicit decomposition
    for u in [field.one()] + _small_units(field):
        if u != alpha and is_totally_positive(alpha - u):
            return False
    upper = upper_enclosure(alpha)
    for point in iter_integral_points_in_box(field, [0] * field.degree, upper):
        beta = field.from_integral(point)
        if beta == alpha:
            continue
        if is_totally_positive(alpha - beta):
            return False
    return True


def _dedupe(candidates: Sequence[FieldElement]) -> List[FieldElement]:
    reps: List[FieldElement] = []
    for alpha in candidates:
        if not any(are_associates(alpha, r) for r in reps):
            reps.append(alpha)
    return reps


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------
def _as_fraction(x, bits: int) -> Fraction:
    """Exact value of an interval endpoint carrying at most bits mantissa bits."""
    v = mpmath.mpf(x, prec=bits)
    return int(mpmath.sign(v)) * Fraction(abs(int(v.man))) * Fraction(2) ** int(v.exp)


def _domain_boxes(
    field: Field, generators: Sequence[FieldElement], norm_bound: int, bits: int = 96
) -> List[Tuple[List[Fraction], List[Fraction]]]:
    """Rational boxes covering every alpha with 1 <= N(alpha) <= norm_bound in the unit domain.

    Box ends are interval enclosures rounded outward.
    """
    n = field.degree
    m = len(generators)
    saved = iv.prec
    iv.prec = bits
    try:
        gen_logs = [[units.log_abs_interval(g, i, bits) for i in range(n)] for g in generators]
        cells = [
            max(1, math.ceil(max(max(abs(_as_fraction(v.a, bits)), abs(_as_fraction(v.b, bits))) for v in row) / CELL_WIDTH))
            for row in gen_logs
        ]
        log_scale = iv.log(norm_bound) / n
        boxes = []
        for cell in itertools.product(*(range(c) for c in cells)):
            lower, upper = [], []
            for i in range(n):
                total = iv.mpf(0)
                for k in range(m):
                    total += gen_logs[k][i] * (iv.mpf([cell[k], cell[k] + 1]) / cells[k])
                lower.append(_as_fraction(iv.exp(total).a, bits))
                upper.append(_as_fraction(iv.exp(total + log_scale).b, bits))
            boxes.append((lower, upper))
        return boxes
    finally:
        iv.prec = saved


def _bruteforce_at(field: Field, generators: Sequence[FieldElement], norm_bound: int) -> List[FieldElement]:
    seen = set()
    found: List[FieldElement] = []
    for lower, upper in _domain_boxes(field, generators, norm_bound):
        for point in iter_integral_points_in_box(field, lower, upper):
            if point in seen:
                continue
            seen.add(point)
            alpha = field.from_integral(point)
            if norm(alpha) > norm_bound:
                continue
            if is_indecomposable(alpha):
                found.append(alpha)
    reps = _dedupe(found)
    logger.debug(f"{field.descriptor.label}: {len(seen)} candidates up to norm {norm_bound}, {len(reps)} classes")
    return reps


def bruteforce_indecomposables(field: Field, bound: Optional[int] = None) -> IndecomposableSet:
    """Indecomposables modulo totally positive units by enumeration over the unit domain."""
    generators = totally_positive_unit_generators(field)
    domain = f"log-parallelepiped of {len(generators)} totally positive unit generators"
    if bound is not None:
        reps = _bruteforce_at(field, generators, bound)
        return IndecomposableSet(field, reps, "bruteforce", domain, f"desk-verified up to B={bound}")
    nb = math.isqrt(abs(field.discriminant)) + 1
    if field.kind == "quadratic":
        nb = max(nb, abs(field.discriminant) // 4 + 1)
    previous = _bruteforce_at(field, generators, nb)
    while True:
        nb *= 2
        current = _bruteforce_at(field, generators, nb)
        logger.info(f"{field.descriptor.label}: {len(current)} classes at norm bound {nb}")
        if len(current) == len(previous):
            return IndecomposableSet(field, current, "bruteforce", domain, f"desk-verified up to B={nb}")
        previous = current


# ---------------------------------------------------------------------------
# Sail counts
# ---------------------------------------------------------------------------
def iota_int_bound(face: latgeo.IntegerPolytope, T: latgeo.Triangulation) -> int:
    """Upper bound ID * IV - k on indecomposables in the cone over face but off the sail."""
    volume = sum(T.volumes())
    distance = latgeo.integer_distance(face)
    if distance == 1 and latgeo.is_unimodular(T):
        logger.debug(f"{face.label or 'face'}: unimodular at distance 1, every indecomposable lies on the face")
        return 0
    return distance * volume - len(T.simplices)


def iota_int_exact_cubic(face: latgeo.IntegerPolytope) -> int:
    """(ID - 1) * IV for a 2-dimensional sail face of a cubic field."""
    if face.field.degree != 3:
        raise WrongDegree(f"exact interior count needs a cubic field, got degree {face.field.degree}")
    return (latgeo.integer_distance(face) - 1) * latgeo.polytope_volume(face)


@dataclass
class SailData:
    """A fundamental set of sail faces together with what certifies its completeness."""

    field: Field
    faces: List[latgeo.IntegerPolytope]
    triangulations: Dict[str, latgeo.Triangulation]
    matching: Optional[latgeo.MatchReport]
    generators: List[FieldElement]


def sail_certified_iota(sail: SailData) -> IndecomposableSet:
    if not sail.faces:
        raise IncompleteSailData("no faces supplied")
    if sail.matching is None or not sail.matching.closed:
        raise IncompleteSailData("face matching is missing or not closed")
    field = sail.field
    points: List[FieldElement] = []
    interior = 0
    conditional = []
    interior_reps: List[FieldElement] = []
    supplied = []
    for face in sail.faces:
        # cubic faces may sit at trace level k > 1; those are taken as supplied
        level = None if field.degree == 3 else 1
        try:
            cert = latgeo.certify_on_sail(face, max_level=level)
        except NotCertifiable as exc:
            raise IncompleteSailData(f"face {face.label} is not certified: {exc.reason}") from exc
        if cert.k != 1:
            supplied.append(f"{face.label}: trace level {cert.k}")
        points.extend(latgeo.lattice_points(face))
        if field.degree == 3:
            count = iota_int_exact_cubic(face)
            interior += count
            if count and len(face.vertices) == 3:
                interior_reps.extend(p for p in latgeo.off_face_points(face) if is_indecomposable(p))
            continue
        T = sail.triangulations.get(face.label)
        if T is None:
            T = latgeo.triangulate(face)
        bound = iota_int_bound(face, T)
        if bound:
            conditional.append(f"{face.label}: up to {bound} interior indecomposables")
            interior += bound
    reps = _dedupe([reduce_modulo_units(p, sail.generators) for p in points])
    if conditional:
        status = "conditional upper bound (sail)"
    elif supplied:
        status = "sail faces supplied, interior counts exact"
    else:
        status = "certified (sail)"
    result = IndecomposableSet(
        field,
        reps,
        "sail_certified",
        "one copy of each sail face modulo totally positive units",
        status,
        interior_count=interior,
        notes=conditional,
    )
    result.notes.extend(supplied)
    if interior_reps:
        result.notes.append("off-sail indecomposables: " + ", ".join(str(r) for r in _dedupe(interior_reps)))
    return result


def iota(field: Field, strategy: str = "bruteforce", bound: Optional[int] = None, sail: Optional[SailData] = None):
    """(iota(K), IndecomposableSet) for the chosen strategy."""
    if strategy in ("continued_fraction", "cf"):
        if field.kind != "quadratic":
            raise WrongFieldKind("the continued fraction strategy needs a quadratic field")
        reps = cfrac.quadratic_indecomposables(field.descriptor.D)
        result = IndecomposableSet(
            field, reps, "continued_fraction", "upper semiconvergents over one unit period", "proved"
        )
    elif strategy == "bruteforce":
        result = bruteforce_indecomposables(field, bound)
    elif strategy in ("sail", "sail_certified"):
        if sail is None:
            raise IncompleteSailData("sail strategy needs a face list")
        result = sail_certified_iota(sail)
    else:
        raise WrongFieldKind(f"unknown strategy {strategy!r}")
    return result.count, result


# ---------------------------------------------------------------------------
# Rank bounds
# ---------------------------------------------------------------------------
def square_class_count(iota_value: int, n: int, sgnrk: int) -> int:
    """Indecomposables modulo squares of units: 2^(n - sgnrk) * iota."""
    return 2 ** (n - sgnrk) * iota_value


def universal_rank_bounds(iota_value: int, s: int, n: int, sgnrk: int) -> int:
    """Upper bound 2^(n - sgnrk) * s * iota on the classical universal rank."""
    return s * square_class_count(iota_value, n, sgnrk)
