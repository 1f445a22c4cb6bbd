#!/usr/bin/env python3
"""
LATGEO - INTEGER GEOMETRY OF POLYTOPES IN THE MINKOWSKI LATTICE
===============================================================

PURPOSE:
--------
Polytopes here have integral FieldElement vertices. All geometry is done in
integral-basis coordinates (so the lattice is Z^n) and, for anything
dimension-dependent, in a unimodular affine chart of the polytope's own
affine lattice.

MAIN OPERATIONS:
---------------
- integer_volume / polytope_volume   lattice-normalised volumes
- integer_distance                   index of <A cap Lambda> in its saturation
- codifferent_functional             delta in the codifferent with Tr(delta v) = k
- certify_on_sail                    k = 1 and delta totally positive
- facets / lattice_points            exact hull in a chart (dim 1, 2, 3)
- triangulate / validate_triangulation
- lattice_points_on_face             boundary and interior counts (Pick)
- parallelepiped_lattice_count       IV * ID - 1, checked by enumeration
- off_face_points                    parallelepiped points above the face plane, per simplex
- match_facets                       unit gluing of facets across polytopes

NOTES:
------
Hull facets are found by testing every d-subset of points for a supporting
hyperplane. That is fine for the face sizes met here (at most a few dozen
lattice points per polytope) and keeps every predicate an exact integer test.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from sympy import Matrix

import intlattice
from field_core import (
    Field,
    FieldElement,
    _fraction,
    element_to_json,
    enumerate_integers_in_box,
    is_integral,
    is_totally_positive,
    is_unit,
    norm,
    numeric_embeddings,
    power,
    trace,
    upper_enclosure,
)
from sail_errors import (
    CountMismatch,
    DegenerateInput,
    DegeneratePlane,
    NotASimplex,
    NotCertifiable,
    UnsupportedDimension,
)

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Small exact helpers
# ---------------------------------------------------------------------------
def _det(rows: Sequence[Sequence]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return intlattice.determinant(rows)


def _sub(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def _dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def _normal(points: Sequence[Vector]) -> Optional[Vector]:
    """Integer normal of the hyperplane through d points in Z^d (None if degenerate)."""
    d = len(points[0])
    base = points[0]
    diffs = [_sub(p, base) for p in points[1:]]
    if d == 2:
        (x, y), = diffs
        n = (y, -x)
    else:
        (a1, a2, a3), (b1, b2, b3) = diffs
        n = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    if not any(n):
        return None
    g = math.gcd(*n)
    return tuple(v // g for v in n)


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LatticeChart:
    """Unimodular affine chart: x = origin + sum_k y_k basis[k] for y in Z^d."""

    origin: Vector
    basis: Tuple[Vector, ...]
    lattice: Optional[intlattice.Sublattice]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence[int]) -> bool:
        if self.lattice is None:
            return tuple(x) == self.origin
        return self.lattice.in_span(_sub(x, self.origin))

    def to_chart(self, x: Sequence[int]) -> Vector:
        if self.lattice is None:
            return ()
        return self.lattice.coordinates(_sub(x, self.origin))

    def from_chart(self, y: Sequence[int]) -> Vector:
        out = list(self.origin)
        for c, b in zip(y, self.basis):
            for k, v in enumerate(b):
                out[k] += c * v
        return tuple(out)


def lattice_chart(points: Sequence[Sequence[int]]) -> LatticeChart:
    origin = tuple(points[0])
    diffs = [_sub(p, origin) for p in points[1:] if tuple(p) != origin]
    if not diffs:
        return LatticeChart(origin, (), None)
    lat = intlattice.sublattice(diffs)
    return LatticeChart(origin, tuple(lat.saturation_basis()), lat)


# ---------------------------------------------------------------------------
# Polytopes
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IntegerPolytope:
    field: Field
    vertices: Tuple[FieldElement, ...]
    dim: int
    label: str = ""

    @cached_property
    def coords(self) -> Tuple[Vector, ...]:
        return tuple(_int_coords(v) for v in self.vertices)

    @cached_property
    def chart(self) -> LatticeChart:
        return lattice_chart(self.coords)

    @cached_property
    def chart_points(self) -> Tuple[Vector, ...]:
        return tuple(self.chart.to_chart(x) for x in self.coords)

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor.to_json(),
            "label": self.label,
            "dim": self.dim,
            "vertices": [[str(c) for c in v.coords] for v in self.vertices],
        }

    def canonical_key(self) -> Tuple:
        return tuple(sorted(v.coords for v in self.vertices))


def _int_coords(alpha: FieldElement) -> Vector:
    coords = alpha.field.integral_coordinates(alpha)
    if any(c.denominator != 1 for c in coords):
        raise DegenerateInput(f"{alpha} is not integral")
    return tuple(int(c) for c in coords)


def make_polytope(vertices: Sequence[FieldElement], label: str = "") -> IntegerPolytope:
    """Polytope spanned by integral points (duplicates dropped, order kept)."""
    if not vertices:
        raise DegenerateInput("polytope without vertices")
    unique: List[FieldElement] = []
    for v in vertices:
        if v not in unique:
            unique.append(v)
    field = unique[0].field
    for v in unique:
        if not is_integral(v):
            raise DegenerateInput(f"vertex {v} is not integral")
    coords = [_int_coords(v) for v in unique]
    diffs = [_sub(x, coords[0]) for x in coords[1:]]
    dim = intlattice.rank(diffs) if diffs and any(any(d) for d in diffs) else 0
    return IntegerPolytope(field, tuple(unique), dim, label)


def polytope_from_json(data: dict, field: Field) -> IntegerPolytope:
    vertices = [field.element([Fraction(c) for c in v]) for v in data["vertices"]]
    return make_polytope(vertices, data.get("label", ""))


# ---------------------------------------------------------------------------
# Integer volume and distance
# ---------------------------------------------------------------------------
def _simplex_volume(points: Sequence[Vector]) -> int:
    diffs = [_sub(p, points[0]) for p in points[1:]]
    if not diffs:
        return 1
    lat = intlattice.sublattice(diffs)
    if lat.rank < len(diffs):
        raise NotASimplex("vertices are affinely dependent")
    return lat.index


def integer_volume(S: IntegerPolytope) -> int:
    """Index of the edge lattice <v_i - v_0> in Lambda cap span (simplices only)."""
    if len(S.vertices) != S.dim + 1:
        raise NotASimplex(f"{len(S.vertices)} vertices in dimension {S.dim}")
    return _simplex_volume(S.coords)


def integer_distance(S: IntegerPolytope) -> int:
    """0 if the affine hull meets the origin, else the saturation index of <S cap Lambda>."""
    points = [_int_coords(p) for p in lattice_points(S)]
    if intlattice.rank(points) == S.dim:
        return 0
    _, index = intlattice.saturation(points)
    return index


# ---------------------------------------------------------------------------
# Codifferent functionals and sail certificates
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SailCertificate:
    polytope: IntegerPolytope
    delta: FieldElement
    k: int

    def to_json(self) -> dict:
        return {
            "polytope": self.polytope.label,
            "delta": [str(c) for c in self.delta.coords],
            "k": self.k,
            "certified": self.k == 1,
        }


def _rational_gcd(values: Sequence[Fraction]) -> Fraction:
    nums = [v.numerator for v in values if v]
    dens = [v.denominator for v in values if v]
    return Fraction(math.gcd(*nums), math.lcm(*dens))


def codifferent_functional(S: IntegerPolytope) -> Tuple[FieldElement, int]:
    """(delta, k): primitive delta in the codifferent with Tr(delta v) = k on S."""
    field = S.field
    n = field.degree
    if S.dim != n - 1:
        raise DegeneratePlane(f"polytope of dimension {S.dim} is not a hyperplane section in degree {n}")
    rows = list(S.coords)
    lat = intlattice.sublattice(rows)
    if lat.rank < n:
        raise DegeneratePlane("affine hull passes through the origin")
    chosen = [rows[i] for i in lat.independent_rows]
    solution = Matrix(chosen).LUsolve(Matrix([1] * n))
    y = [_fraction(solution[k]) for k in range(n)]
    for x in rows:
        if _dot(x, y) != 1:
            raise DegeneratePlane("vertices are not coplanar")
    g = _rational_gcd(y)
    primitive = [c / g for c in y]
    dual = field.codifferent_basis()
    delta = field.zero()
    for c, b in zip(primitive, dual):
        if c:
            delta = delta + b * c
    k = 1 / g
    if k.denominator != 1:
        raise DegeneratePlane(f"non-integral trace level {k}")
    return delta, int(k)


def certify_on_sail(S: IntegerPolytope, max_level: Optional[int] = 1) -> SailCertificate:
    """Certificate that S lies on the sail: Tr(delta .) = 1 with delta totally positive.

    max_level=None accepts any trace level k; only k = 1 proves sail membership.
    """
    for v in S.vertices:
        if not is_totally_positive(v):
            raise NotCertifiable("vertex not totally positive", f"vertex {v} is not totally positive")
    try:
        delta, k = codifferent_functional(S)
    except DegeneratePlane as exc:
        raise NotCertifiable("degenerate plane", str(exc)) from exc
    if max_level is not None and k > max_level:
        raise NotCertifiable("trace level k > 1", f"primitive trace level is {k}")
    if not is_totally_positive(delta):
        raise NotCertifiable("delta not totally positive", f"delta = {delta} is not totally positive")
    logger.debug(f"certified {S.label or 'polytope'} with delta {delta}")
    return SailCertificate(S, delta, k)


# ---------------------------------------------------------------------------
# Hull in a chart
# ---------------------------------------------------------------------------
def _halfspaces(points: Sequence[Vector]) -> List[Tuple[Vector, int]]:
    """Supporting halfspaces n.y <= c of conv(points), points full-dimensional in Z^d."""
    d = len(points[0])
    unique = sorted(set(points))
    if d == 1:
        values = [p[0] for p in unique]
        return [((1,), max(values)), ((-1,), -min(values))]
    found: Dict[Tuple[Vector, int], None] = {}
    for subset in itertools.combinations(unique, d):
        n = _normal(subset)
        if n is None:
            continue
        c = _dot(n, subset[0])
        values = [_dot(n, p) for p in unique]
        if all(v <= c for v in values):
            found[(n, c)] = None
        elif all(v >= c for v in values):
            found[(tuple(-v for v in n), -c)] = None
    return list(found)


def _hull_data(S: IntegerPolytope) -> List[Tuple[Vector, int]]:
    if S.dim not in (1, 2, 3):
        raise UnsupportedDimension(f"hull computations support dimensions 1-3, got {S.dim}")
    return _halfspaces(S.chart_points)


def facets(S: IntegerPolytope) -> List[IntegerPolytope]:
    """(dim-1)-faces; each lists the polytope's given points lying on it."""
    if S.dim < 1:
        raise DegenerateInput("a point has no facets")
    out = []
    for n, c in _hull_data(S):
        on_plane = [v for v, y in zip(S.vertices, S.chart_points) if _dot(n, y) == c]
        out.append(make_polytope(on_plane, f"{S.label}/facet{len(out) + 1}" if S.label else ""))
    return out


def lattice_points(S: IntegerPolytope) -> List[FieldElement]:
    """Every integral point of conv(S), exactly."""
    if S.dim == 0:
        return [S.vertices[0]]
    halfspaces = _hull_data(S)
    pts = S.chart_points
    ranges = [range(min(p[k] for p in pts), max(p[k] for p in pts) + 1) for k in range(S.dim)]
    out = []
    for y in itertools.product(*ranges):
        if all(_dot(n, y) <= c for n, c in halfspaces):
            out.append(S.field.from_integral(S.chart.from_chart(y)))
    return out


def _polygon_order(points: Sequence[Tuple]) -> List[Tuple]:
    """Extreme points of a planar point set in counter-clockwise order (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polytope_volume(S: IntegerPolytope) -> int:
    """Normalised volume d! vol(S) in the chart, via cones from the centroid over facets."""
    d = S.dim
    pts = S.chart_points
    if d == 0:
        return 1
    if d == 1:
        values = [p[0] for p in pts]
        return max(values) - min(values)
    centre = tuple(Fraction(sum(p[k] for p in pts), len(pts)) for k in range(d))
    total = Fraction(0)
    for n, c in _halfspaces(pts):
        face = [p for p in pts if _dot(n, p) == c]
        if d == 2:
            a, b = min(face), max(face)
            total += abs(_det([_sub(a, centre), _sub(b, centre)]))
            continue
        # drop the coordinate where the normal is largest; the projection stays injective
        drop = max(range(3), key=lambda k: abs(n[k]))
        keep = [k for k in range(3) if k != drop]
        projected = {tuple(p[k] for k in keep): p for p in face}
        ring = [projected[q] for q in _polygon_order(list(projected))]
        for i in range(1, len(ring) - 1):
            total += abs(_det([_sub(ring[0], centre), _sub(ring[i], centre), _sub(ring[i + 1], centre)]))
    if total.denominator != 1:
        raise DegenerateInput(f"non-integral normalised volume {total}")
    return int(total)


# ---------------------------------------------------------------------------
# Triangulations
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Triangulation:
    points: Tuple[FieldElement, ...]
    simplices: Tuple[Tuple[int, ...], ...]

    def simplex(self, k: int) -> IntegerPolytope:
        return make_polytope([self.points[i] for i in self.simplices[k]])

    def volumes(self) -> List[int]:
        coords = [_int_coords(p) for p in self.points]
        return [_simplex_volume([coords[i] for i in s]) for s in self.simplices]


def is_unimodular(T: Triangulation) -> bool:
    return all(v == 1 for v in T.volumes())


def _orientation(points: Sequence[Vector]) -> int:
    base = points[0]
    value = _det([_sub(p, base) for p in points[1:]])
    return (value > 0) - (value < 0)


def triangulate(S: IntegerPolytope) -> Triangulation:
    """Placing triangulation through every lattice point of S (dim 2 or 3)."""
    if S.dim not in (2, 3):
        raise UnsupportedDimension(f"triangulation supports dimensions 2 and 3, got {S.dim}")
    d = S.dim
    elements = lattice_points(S)
    pts = [S.chart.to_chart(_int_coords(e)) for e in elements]
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    start = [order[0]]
    for i in order[1:]:
        trial = start + [i]
        diffs = [_sub(pts[j], pts[start[0]]) for j in trial[1:]]
        if intlattice.rank(diffs) == len(trial) - 1:
            start = trial
        if len(start) == d + 1:
            break
    simplices = [tuple(start)]
    for i in order:
        if i in start:
            continue
        p = pts[i]
        containing = [s for s in simplices if _in_closed_simplex(p, [pts[j] for j in s])]
        if containing:
            simplices = [s for s in simplices if s not in containing]
            for s in containing:
                for k in range(d + 1):
                    new = s[:k] + (i,) + s[k + 1:]
                    if _orientation([pts[j] for j in new]) != 0:
                        simplices.append(new)
            continue
        additions = []
        for s, facet, opposite in _boundary_facets(simplices):
            facet_pts = [pts[j] for j in facet]
            inner = _orientation(facet_pts + [pts[opposite]])
            outer = _orientation(facet_pts + [p])
            if outer != 0 and outer != inner:
                additions.append(tuple(facet) + (i,))
        simplices.extend(additions)
    return Triangulation(tuple(elements), tuple(tuple(sorted(s)) for s in simplices))


def _in_closed_simplex(p: Vector, simplex: Sequence[Vector]) -> bool:
    d = len(p)
    total = _orientation(simplex)
    if total == 0:
        return False
    for k in range(d + 1):
        replaced = list(simplex)
        replaced[k] = p
        o = _orientation(replaced)
        if o != 0 and o != total:
            return False
    return True


def _boundary_facets(simplices: Sequence[Tuple[int, ...]]):
    count: Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], int]]] = {}
    for s in simplices:
        for k in range(len(s)):
            facet = tuple(sorted(s[:k] + s[k + 1:]))
            count.setdefault(facet, []).append((s, s[k]))
    for facet, owners in count.items():
        if len(owners) == 1:
            s, opposite = owners[0]
            yield s, facet, opposite


@dataclass
class TriangulationReport:
    ok: bool
    volume_sum: int
    polytope_volume: int
    unimodular: bool
    problems: List[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "volume_sum": self.volume_sum,
            "polytope_volume": self.polytope_volume,
            "unimodular": self.unimodular,
            "problems": self.problems,
        }


def _separating_axes(P: Sequence[Vector], Q: Sequence[Vector]) -> List[Vector]:
    d = len(P[0])
    if d == 1:
        return [(1,)]
    axes = []
    for simplex in (P, Q):
        for facet in itertools.combinations(simplex, d):
            n = _normal(list(facet))
            if n is not None:
                axes.append(n)
    if d == 3:
        origin = (0, 0, 0)
        for a, b in itertools.combinations(P, 2):
            for c, e in itertools.combinations(Q, 2):
                n = _normal([origin, _sub(b, a), _sub(e, c)])
                if n is not None:
                    axes.append(n)
    return axes


def _interiors_disjoint(P: Sequence[Vector], Q: Sequence[Vector]) -> bool:
    """Two full-dimensional simplices have disjoint interiors iff some axis separates them."""
    for n in _separating_axes(P, Q):
        p = [_dot(n, y) for y in P]
        q = [_dot(n, y) for y in Q]
        if max(p) <= min(q) or max(q) <= min(p):
            return True
    return False


def validate_triangulation(S: IntegerPolytope, T: Triangulation) -> TriangulationReport:
    """Full dimension, containment, volume additivity and interior disjointness of T against S.

    T may be any dissection of S into lattice simplices; facets need not be shared.
    """
    problems: List[str] = []
    coords = [_int_coords(p) for p in T.points]
    chart_pts = []
    for i, x in enumerate(coords):
        if not S.chart.contains(x):
            problems.append(f"point {i} is off the affine hull")
            chart_pts.append(None)
        else:
            chart_pts.append(S.chart.to_chart(x))
    volumes = []
    for k, s in enumerate(T.simplices):
        if len(s) != S.dim + 1:
            problems.append(f"simplex {k} has {len(s)} vertices")
            continue
        try:
            volumes.append(_simplex_volume([coords[i] for i in s]))
        except NotASimplex:
            problems.append(f"simplex {k} is degenerate")
    expected = polytope_volume(S)
    if sum(volumes) != expected:
        problems.append(f"simplex volumes sum to {sum(volumes)}, polytope volume is {expected}")
    if not any(p.startswith("point") for p in problems):
        halfspaces = _hull_data(S)
        used = sorted({i for s in T.simplices for i in s})
        for i in used:
            if not all(_dot(n, chart_pts[i]) <= c for n, c in halfspaces):
                problems.append(f"point {i} lies outside the polytope")
    if not problems:
        simplices = [[chart_pts[i] for i in s] for s in T.simplices]
        for j, k in itertools.combinations(range(len(simplices)), 2):
            if not _interiors_disjoint(simplices[j], simplices[k]):
                problems.append(f"simplices {j} and {k} overlap")
    return TriangulationReport(
        ok=not problems,
        volume_sum=sum(volumes),
        polytope_volume=expected,
        unimodular=bool(volumes) and all(v == 1 for v in volumes) and not problems,
        problems=problems,
    )


# ---------------------------------------------------------------------------
# Lattice point counts
# ---------------------------------------------------------------------------
def lattice_points_on_face(S: IntegerPolytope) -> Tuple[int, int]:
    """(boundary, interior) lattice point counts of a 2-dimensional face via Pick."""
    if S.dim != 2:
        raise DegenerateInput(f"Pick counts need a 2-dimensional face, got dimension {S.dim}")
    ring = _polygon_order(list(S.chart_points))
    boundary = 0
    for a, b in zip(ring, ring[1:] + ring[:1]):
        boundary += math.gcd(*(_sub(b, a)))
    area2 = polytope_volume(S)
    interior = (area2 - boundary + 2) // 2
    return boundary, interior


def parallelepiped_points(S: IntegerPolytope) -> List[FieldElement]:
    """Nonzero integral points sum lambda_i alpha_i with 0 <= lambda_i < 1 over the vertices of S."""
    field = S.field
    n = field.degree
    if len(S.vertices) != n or S.dim != n - 1:
        raise NotASimplex("parallelepiped needs n affinely independent vertices")
    upper = [Fraction(0)] * n
    for v in S.vertices:
        for i, b in enumerate(upper_enclosure(v)):
            upper[i] += b
    upper = [u + 1 for u in upper]
    sym_inverse = Matrix([list(x) for x in S.coords]).inv()
    inverse = [[_fraction(sym_inverse[j, k]) for k in range(n)] for j in range(n)]
    out = []
    for alpha in enumerate_integers_in_box(field, [0] * n, upper):
        x = _int_coords(alpha)
        lam = [sum(x[j] * inverse[j][k] for j in range(n)) for k in range(n)]
        if all(0 <= c < 1 for c in lam):
            out.append(alpha)
    return out


def off_face_points(S: IntegerPolytope, T: Optional[Triangulation] = None) -> List[FieldElement]:
    """Points of the parallelepipeds over the simplices of T that lie off the face plane of S.

    T defaults to the placing triangulation through every lattice point of S, so
    for a cubic face the result holds (ID - 1) * IV points, all at trace levels
    strictly between k and 2k.
    """
    delta, k = codifferent_functional(S)
    if T is None:
        if len(S.vertices) == S.dim + 1 and integer_volume(S) == 1:
            simplices = [S]
        else:
            T = triangulate(S)
    if T is not None:
        simplices = [T.simplex(j) for j in range(len(T.simplices))]
    seen = set()
    out = []
    for simplex in simplices:
        for x in parallelepiped_points(simplex):
            if trace(delta * x) > k and x.coords not in seen:
                seen.add(x.coords)
                out.append(x)
    return out


def parallelepiped_lattice_count(S: IntegerPolytope, enumerate_check: bool = True) -> int:
    """#(O_K+ cap {sum lambda_i alpha_i : 0 <= lambda < 1}) = IV * ID - 1 for a simplex of dim n-1."""
    n = S.field.degree
    if len(S.vertices) != n or S.dim != n - 1:
        raise NotASimplex("parallelepiped count needs n affinely independent vertices")
    formula = integer_volume(S) * integer_distance(S) - 1
    if not enumerate_check:
        return formula
    count = len(parallelepiped_points(S))
    if count != formula:
        raise CountMismatch(f"parallelepiped enumeration found {count}, formula IV*ID-1 gives {formula}")
    return count


# ---------------------------------------------------------------------------
# Face matching
# ---------------------------------------------------------------------------
@dataclass
class FacetMatch:
    first: str
    second: str
    unit: FieldElement
    exponents: Optional[Tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "unit": [str(c) for c in self.unit.coords],
            "exponents": list(self.exponents) if self.exponents is not None else None,
        }


@dataclass
class MatchReport:
    matches: List[FacetMatch]
    unmatched: List[str]
    overfull: List[List[str]]
    outside_window: List[str]

    @property
    def closed(self) -> bool:
        return not self.unmatched and not self.overfull and not self.outside_window

    def to_json(self) -> dict:
        return {
            "closed": self.closed,
            "pairs": [m.to_json() for m in self.matches],
            "unmatched": self.unmatched,
            "overfull": self.overfull,
            "outside_window": self.outside_window,
        }


def unit_exponents(u: FieldElement, generators: Sequence[FieldElement], window: int) -> Optional[Tuple[int, ...]]:
    """Exponents e with u = prod g_i^e_i, found from log embeddings and verified exactly."""
    m = len(generators)
    if m == 0:
        return () if u == 1 else None
    prec = 96
    logs_u = [mpmath.log(abs(v)) for v in numeric_embeddings(u, prec)]
    logs_g = [[mpmath.log(abs(v)) for v in numeric_embeddings(g, prec)] for g in generators]
    with mpmath.workprec(prec):
        A = mpmath.matrix([[logs_g[k][i] for k in range(m)] for i in range(m)])
        b = mpmath.matrix([logs_u[i] for i in range(m)])
        try:
            solution = mpmath.lu_solve(A, b)
        except ZeroDivisionError:
            return None
    exponents = tuple(int(mpmath.nint(solution[k])) for k in range(m))
    if any(abs(e) > window for e in exponents):
        return None
    product = u.field.one()
    for g, e in zip(generators, exponents):
        product = product * power(g, e)
    return exponents if product == u else None


def _facet_unit(F: IntegerPolytope, G: IntegerPolytope) -> Optional[FieldElement]:
    target = set(F.vertices)
    f0 = F.vertices[0]
    size = abs(norm(f0))
    for g in G.vertices:
        if abs(norm(g)) != size:
            continue
        u = f0 / g
        if not is_unit(u) or not is_totally_positive(u):
            continue
        if {u * x for x in G.vertices} == target:
            return u
    return None


def match_facets(
    polytopes: Sequence[IntegerPolytope],
    unit_generators: Sequence[FieldElement],
    window: int = 2,
) -> MatchReport:
    """Glue every facet of the given polytopes to exactly one other facet by a totally positive unit."""
    all_facets: List[IntegerPolytope] = []
    for S in polytopes:
        for k, F in enumerate(facets(S)):
            label = f"{S.label or 'P'}#{k + 1}"
            all_facets.append(IntegerPolytope(F.field, F.vertices, F.dim, label))
    groups: Dict[Tuple, List[int]] = {}
    for idx, F in enumerate(all_facets):
        key = (len(F.vertices), tuple(sorted(abs(norm(v)) for v in F.vertices)))
        groups.setdefault(key, []).append(idx)
    parent = list(range(len(all_facets)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    matches: List[FacetMatch] = []
    outside: List[str] = []
    for members in groups.values():
        for a, b in itertools.combinations(members, 2):
            F, G = all_facets[a], all_facets[b]
            u = _facet_unit(F, G)
            if u is None:
                continue
            exps = unit_exponents(u, unit_generators, window) if u != 1 else tuple(0 for _ in unit_generators)
            if exps is None:
                outside.append(f"{F.label} ~ {G.label}")
            matches.append(FacetMatch(F.label, G.label, u, exps))
            parent[find(a)] = find(b)
    classes: Dict[int, List[str]] = {}
    for idx, F in enumerate(all_facets):
        classes.setdefault(find(idx), []).append(F.label)
    unmatched = [c[0] for c in classes.values() if len(c) == 1]
    overfull = [c for c in classes.values() if len(c) > 2]
    logger.info(
        f"face matching: {len(all_facets)} facets, {len(matches)} gluings, "
        f"{len(unmatched)} unmatched, {len(overfull)} overfull classes"
    )
    return MatchReport(matches, unmatched, overfull, outside)


def polytope_trace_levels(S: IntegerPolytope, delta: FieldElement) -> List[Fraction]:
    """Tr(delta v) for every vertex v."""
    return [trace(delta * v) for v in S.vertices]


def polytope_report(S: IntegerPolytope) -> dict:
    """IV/ID/certificate summary used by the geometry command."""
    report = {"label": S.label, "dim": S.dim, "vertices": [element_to_json(v)["coeffs"] for v in S.vertices]}
    if len(S.vertices) == S.dim + 1:
        report["integer_volume"] = integer_volume(S)
    elif S.dim in (1, 2, 3):
        report["integer_volume"] = polytope_volume(S)
    report["integer_distance"] = integer_distance(S)
    try:
        cert = certify_on_sail(S)
        report["certificate"] = cert.to_json()
    except NotCertifiable as exc:
        report["certificate"] = {"certified": False, "reason": exc.reason}
    except DegeneratePlane:
        report["certificate"] = {"certified": False, "reason": "not a hyperplane section"}
    return report
