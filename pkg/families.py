#!/usr/bin/env python3
"""
FAMILIES - END-TO-END VERIFICATIONS AND RANK-BOUND CALCULATORS
==============================================================

PURPOSE:
--------
Two worked families are rebuilt from closed formulas and every claimed fact
about them is checked exactly:

- Shanks' simplest cubic fields, whose sail has two faces A1, A2 per unit
  fundamental domain and iota = (a^2 + 3a + 6) / 2.
- K_n = Q(sqrt 5, sqrt p) with p = y_{12n+3}^2 - 1, r = 5p = x_{12n+3}^2 - 1,
  whose sail is tiled by translates of A, B_j^+-, C_j^+- and iota = 6n + 3.

Coordinates [a, b, c, d] below always mean a + b sqrt5 + c sqrt p + d sqrt r.

VERIFICATION REPORTS:
--------------------
A failed check never raises. It is recorded with witnesses (the failing
element, facet or volume) and the report as a whole fails.

  a_total_positivity   1, rho, gamma_j and every delta are totally positive
  b_trace_incidences   Tr(delta x) = 1 for every listed hyperplane member
  c_volumes_charts     IV values, chart coordinates, fixture triangulations
  d_sail_certificates  every polytope is a sail face at trace level 1
  e_face_matching      facets glue perfectly under totally positive units
  f_census             lattice points are translates of 1, rho, gamma_j
  g_iota               iota = 6n + 3 and the logarithmic discriminant bound
  h_hand_inequalities  closed-form inequalities behind gamma_j >> 0

RANK BOUNDS:
-----------
C(R, m) bounds the number of vectors of norm m in a rank-R lattice:
max(480, 2R(R-1)) for m = 2, 2 binom(R+2m-2, 2m-1) otherwise. For rank at
most 12 the sharper value 264 is available as an explicit override.
"""

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import iv
from sympy import Matrix, Rational

import cfrac
import indecomp
import latgeo
import sailconfig
import units
from field_core import (
    Biquadratic,
    Field,
    FieldElement,
    Quadratic,
    SimplestCubic,
    are_associates,
    is_in_codifferent,
    is_integral,
    is_squarefree,
    is_totally_positive,
    make_field,
    power,
    sign_at_embedding,
    trace,
)
from sail_errors import DegenerateInput, NotApplicable, NotSquarefree, SailkitError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------
@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witnesses: List[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "witnesses": self.witnesses}


@dataclass
class VerificationReport:
    """Named checks for one instance; the report passes iff every check passes."""

    instance: str
    kind: str
    checks: List[CheckResult] = dc_field(default_factory=list)
    values: Dict[str, object] = dc_field(default_factory=dict)
    conditional: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "kind": self.kind,
            "passed": self.passed,
            "conditional": self.conditional,
            "values": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.values.items()},
            "checks": [c.to_json() for c in self.checks],
        }


def _run_checks(report: VerificationReport, checks: Sequence[Tuple[str, Callable[[], CheckResult]]]) -> None:
    """Run each check, turning library errors into failed entries; results end up ordered by name."""
    for name, fn in checks:
        try:
            result = fn()
        except SailkitError as exc:
            logger.error(f"{report.instance}: check {name} raised {type(exc).__name__}: {exc}")
            result = CheckResult(name, False, f"{type(exc).__name__}: {exc}")
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"{report.instance}: {name} {'PASS' if result.passed else 'FAIL'} {result.detail}")
        report.checks.append(result)
    report.checks.sort(key=lambda c: c.name)


def _fmt(alpha: FieldElement) -> str:
    return "[" + ", ".join(str(c) for c in alpha.coords) + "]"


# ---------------------------------------------------------------------------
# Lucas pairs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LucasPair:
    """(x_n + y_n sqrt5) / 2 = phi^n with phi the golden ratio."""

    n: int
    x: int
    y: int


_LUCAS: List[Tuple[int, int]] = [(2, 0), (1, 1)]


def _xy(n: int) -> Tuple[int, int]:
    if n < 0:
        raise DegenerateInput(f"Lucas index {n} < 0")
    while len(_LUCAS) <= n:
        x, y = _LUCAS[-1]
        _LUCAS.append(((x + 5 * y) // 2, (x + y) // 2))
    return _LUCAS[n]


def lucas_pair(n: int) -> LucasPair:
    if n < 1:
        raise DegenerateInput(f"Lucas pairs are indexed from 1, got {n}")
    x, y = _xy(n)
    return LucasPair(n, x, y)


def lucas_identity_failures(limit: int = 200) -> List[int]:
    """Indices n <= limit where a recurrence, cross or norm identity fails (empty when all hold)."""
    bad = []
    for n in range(1, limit + 1):
        x, y = _xy(n)
        x1, y1 = _xy(n + 1)
        sign = (-1) ** n
        if 2 * x1 != x + 5 * y or 2 * y1 != x + y:
            bad.append(n)
        elif x * y1 - x1 * y != 2 * sign or x * x1 - 5 * y * y1 != 2 * sign:
            bad.append(n)
        elif x * x - 5 * y * y != 4 * sign:
            bad.append(n)
    return bad


# ---------------------------------------------------------------------------
# The Q(sqrt 5, sqrt p_n) family
# ---------------------------------------------------------------------------
@dataclass
class FamilyInstance:
    n: int
    X: int
    Y: int
    p: int
    r: int
    field: Field
    eps: Tuple[FieldElement, FieldElement, FieldElement]
    rho: FieldElement
    gammas: Dict[int, FieldElement]
    delta_A: FieldElement
    delta_B: Dict[Tuple[int, int], FieldElement]
    delta_C: Dict[Tuple[int, int], FieldElement]
    conditional: bool = False

    @property
    def label(self) -> str:
        return f"family n={self.n} (p={self.p})"

    @property
    def discriminant(self) -> int:
        return self.field.discriminant


def family_instance(
    n: int,
    squarefree_tester: Optional[Callable[[int], bool]] = None,
    assume_squarefree: bool = False,
) -> FamilyInstance:
    """Build every element of K_n from its closed formula.

    squarefree_tester replaces sympy factorisation for p and r. With
    assume_squarefree the test is skipped and the instance is marked
    conditional.
    """
    if n < 0:
        raise DegenerateInput(f"family index {n} < 0")
    X, Y = _xy(12 * n + 3)
    p, r = Y * Y - 1, X * X - 1
    if r != 5 * p:
        raise DegenerateInput(f"r = {r} is not 5p for p = {p}")
    if assume_squarefree:
        logger.warning(f"family n={n}: squarefreeness of p={p} assumed, results are conditional")
    else:
        for value in (p, r):
            if not is_squarefree(value, squarefree_tester):
                raise NotSquarefree(value, f"family n={n}: {value} is not squarefree")
    field = make_field(Biquadratic(5, p))
    if field.radicands != (1, 5, p, r):
        raise DegenerateInput(f"unexpected radicands {field.radicands} for Q(sqrt 5, sqrt {p})")

    def el(*coords) -> FieldElement:
        return field.element([Fraction(c) for c in coords])

    eps1 = el(Fraction(3, 2), Fraction(1, 2), 0, 0)
    eps2 = el(Y, 0, 1, 0)
    eps3 = el(X, 0, 0, 1)
    rho = el(Fraction(X + Y, 2), 0, Fraction(-1, 2), Fraction(1, 2))
    gammas: Dict[int, FieldElement] = {}
    for j in range(1, 6 * n + 2):
        x, y = _xy(2 * j - 1)
        s = (-1) ** j
        gammas[j] = el(Fraction(y * X + 1, 2), Fraction(x * X - s, 10), Fraction(s * x, 2), Fraction(s * y, 2))
    gammas[0] = gammas[1] * power(eps1, -1) * eps3

    delta_A = el(Fraction(1, 4), Fraction(-1, 20), 0, Fraction(-1, 5 * (X + Y)))
    delta_B: Dict[Tuple[int, int], FieldElement] = {}
    for j in range(1, 3 * n + 1):
        x, y = _xy(4 * j - 1)
        for s in (1, -1):
            delta_B[(j, s)] = el(
                Fraction(1, 4), Fraction(-1, 20), Fraction(s * (X - x), 20 * p), Fraction(-s * (X - y), 4 * r)
            )
    delta_C: Dict[Tuple[int, int], FieldElement] = {}
    for j in range(1, 6 * n + 2):
        x, y = _xy(2 * j - 1)
        for s in (1, -1):
            delta_C[(j, s)] = el(
                Fraction(1, 4), Fraction(s, 20), Fraction(-(Y - y), 4 * p), Fraction(-s * (Y - x), 4 * r)
            )
    inst = FamilyInstance(
        n, X, Y, p, r, field, (eps1, eps2, eps3), rho, gammas, delta_A, delta_B, delta_C, assume_squarefree
    )
    logger.info(f"{inst.label}: X={X}, Y={Y}, r={r}, disc={field.discriminant}")
    return inst


def _sign_name(s: int) -> str:
    return "+" if s > 0 else "-"


def hyperplane_lists(inst: FamilyInstance) -> Dict[str, Tuple[FieldElement, List[FieldElement]]]:
    """label -> (delta, elements with Tr(delta x) = 1) for every listed polytope, C_1^+ included."""
    n = inst.n
    e1, e2, e3 = inst.eps
    one = inst.field.one()
    g = inst.gammas

    def E(k: int) -> FieldElement:
        return power(e1, k)

    e3inv = power(e3, -1)
    out: Dict[str, Tuple[FieldElement, List[FieldElement]]] = {}
    out["A"] = (
        inst.delta_A,
        [
            one,
            e1,
            E(6 * n + 1) * e2,
            E(6 * n + 2) * e2,
            E(6 * n + 1) * e3,
            E(6 * n + 2) * e3,
            e2 * e3,
            e1 * e2 * e3,
            inst.rho * e2,
            inst.rho * e1 * e2,
            g[6 * n] * e1,
            g[6 * n] * E(2),
            g[6 * n + 1] * e2 * e3,
            g[6 * n + 1] * e1 * e2 * e3,
        ],
    )
    for j in range(1, 3 * n + 1):
        out[f"B+{j}"] = (
            inst.delta_B[(j, 1)],
            [one, e1, E(2 * j - 1) * e3, E(2 * j) * e3, g[2 * j - 2] * e1, g[2 * j - 2] * E(2), g[2 * j], g[2 * j] * e1],
        )
        out[f"B-{j}"] = (
            inst.delta_B[(j, -1)],
            [
                one,
                e1,
                E(2 * j - 1) * e3inv,
                E(2 * j) * e3inv,
                g[2 * j - 1],
                g[2 * j - 1] * e1,
                g[2 * j + 1] * E(-1),
                g[2 * j + 1],
            ],
        )
    for j in range(1, 6 * n + 2):
        out[f"C+{j}"] = (inst.delta_C[(j, 1)], [E(-1), one, E(-j) * e2, E(1 - j) * e2])
        out[f"C-{j}"] = (inst.delta_C[(j, -1)], [one, e1, E(j - 1) * e2, E(j) * e2])
    return out


def fundamental_labels(n: int) -> List[str]:
    """One polytope per orbit: A, B_j^+- (j <= 3n), C_j^+ (2 <= j), C_j^- (j <= 6n+1)."""
    labels = ["A"]
    for j in range(1, 3 * n + 1):
        labels += [f"B+{j}", f"B-{j}"]
    labels += [f"C+{j}" for j in range(2, 6 * n + 2)]
    labels += [f"C-{j}" for j in range(1, 6 * n + 2)]
    return labels


def family_polytopes(inst: FamilyInstance, fundamental: bool = True) -> List[latgeo.IntegerPolytope]:
    lists = hyperplane_lists(inst)
    labels = fundamental_labels(inst.n) if fundamental else list(lists)
    return [latgeo.make_polytope(lists[label][1], label) for label in labels]


# ---------------------------------------------------------------------------
# Chart fixtures for A and B_j^+-
# ---------------------------------------------------------------------------
# chart coordinates of the listed elements, in list order, w.r.t. origin 1
# and basis (first three non-origin list entries as noted per polytope) - 1
A_CHART = (
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -3, 2), (-2, -2, 3), (-2, -2, 2),
    (-3, -2, 4), (-1, -1, 1), (-1, -1, 2), (-1, -2, 1), (0, -1, 1), (-1, 0, 1), (-2, -1, 3),
)
A_SIMPLICES = (
    (1, 2, 3, 12), (1, 2, 11, 12), (1, 3, 8, 9), (1, 3, 8, 14), (1, 3, 10, 12), (1, 3, 10, 14),
    (1, 9, 10, 12), (1, 9, 10, 14), (1, 9, 11, 12), (2, 3, 4, 10), (2, 3, 10, 12), (3, 4, 10, 14),
    (3, 7, 8, 9), (3, 7, 8, 13), (5, 6, 8, 11), (5, 6, 11, 12), (5, 7, 8, 11), (6, 8, 11, 12),
    (7, 8, 9, 10), (7, 8, 10, 11), (7, 9, 10, 11), (8, 9, 10, 14), (8, 10, 11, 12), (9, 10, 11, 12),
)
B_CHART = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 4, -5), (0, 0, 1), (1, 1, -1), (0, 1, -1), (1, 3, -4))
B_SIMPLICES = (
    (1, 2, 5, 6), (1, 2, 6, 8), (1, 5, 6, 7), (1, 6, 7, 8), (3, 4, 5, 6),
    (3, 4, 5, 7), (4, 5, 6, 8), (4, 5, 7, 8), (5, 6, 7, 8),
)
# list positions (0-based) of the chart basis ends: A uses eps1, eps1^{6n+1} eps2,
# eps1^{6n+2} eps2; B uses eps1, the eps3 translate and the first gamma
A_BASIS = (1, 2, 3)
B_BASIS = (1, 2, 4)

EXPECTED_VOLUMES = {"A": 24, "B": 9, "C": 1}


@dataclass(frozen=True)
class ChartFixture:
    label: str
    basis_positions: Tuple[int, int, int]
    coordinates: Tuple[Tuple[int, int, int], ...]
    simplices: Tuple[Tuple[int, ...], ...]

    def triangulation(self, elements: Sequence[FieldElement]) -> latgeo.Triangulation:
        return latgeo.Triangulation(tuple(elements), tuple(tuple(i - 1 for i in s) for s in self.simplices))


def fixtures(n: int) -> Dict[str, ChartFixture]:
    out = {"A": ChartFixture("A", A_BASIS, A_CHART, A_SIMPLICES)}
    for j in range(1, 3 * n + 1):
        for s in (1, -1):
            label = f"B{_sign_name(s)}{j}"
            out[label] = ChartFixture(label, B_BASIS, B_CHART, B_SIMPLICES)
    return out


def chart_coordinates(
    origin: FieldElement, basis: Sequence[FieldElement], point: FieldElement
) -> Optional[Tuple[int, ...]]:
    """Integer y with point = origin + sum y_k (basis_k - origin), or None."""
    field = origin.field
    o = field.integral_coordinates(origin)
    cols = [[c - oc for c, oc in zip(field.integral_coordinates(b), o)] for b in basis]
    M = Matrix([[Rational(col[i].numerator, col[i].denominator) for col in cols] for i in range(field.degree)])
    rhs = Matrix([Rational(c.numerator, c.denominator) - Rational(oc.numerator, oc.denominator)
                  for c, oc in zip(field.integral_coordinates(point), o)])
    try:
        solution, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        return None
    if any(not v.is_integer for v in solution):
        return None
    return tuple(int(v) for v in solution)


# ---------------------------------------------------------------------------
# Family checks
# ---------------------------------------------------------------------------
def _check_total_positivity(inst: FamilyInstance) -> CheckResult:
    witnesses = []
    named = [("1", inst.field.one()), ("rho", inst.rho)]
    named += [(f"gamma_{j}", g) for j, g in sorted(inst.gammas.items())]
    for label, alpha in named:
        if not is_integral(alpha):
            witnesses.append(f"{label} = {_fmt(alpha)} is not integral")
        elif not is_totally_positive(alpha):
            witnesses.append(f"{label} = {_fmt(alpha)} is not totally positive")
    deltas = [("delta_A", inst.delta_A)]
    deltas += [(f"delta_B{_sign_name(s)}{j}", d) for (j, s), d in sorted(inst.delta_B.items())]
    deltas += [(f"delta_C{_sign_name(s)}{j}", d) for (j, s), d in sorted(inst.delta_C.items())]
    for label, d in deltas:
        if not is_totally_positive(d):
            witnesses.append(f"{label} = {_fmt(d)} is not totally positive")
    checked = len(named) + len(deltas)
    return CheckResult("a_total_positivity", not witnesses, f"{checked} elements", witnesses)


def _check_incidences(inst: FamilyInstance) -> CheckResult:
    witnesses = []
    count = 0
    for label, (delta, members) in hyperplane_lists(inst).items():
        if not is_in_codifferent(delta):
            witnesses.append(f"delta of {label} is not in the codifferent")
        for k, x in enumerate(members):
            count += 1
            value = trace(delta * x)
            if value != 1:
                witnesses.append(f"{label}[{k + 1}]: Tr(delta x) = {value} for x = {_fmt(x)}")
    expected = 14 + 16 * 3 * inst.n + 8 * (6 * inst.n + 1)
    if count != expected:
        witnesses.append(f"{count} incidences listed, expected {expected}")
    return CheckResult("b_trace_incidences", not witnesses, f"{count} incidences", witnesses)


def _check_volumes_and_charts(inst: FamilyInstance) -> CheckResult:
    witnesses = []
    lists = hyperplane_lists(inst)
    fx = fixtures(inst.n)
    for label in fundamental_labels(inst.n):
        members = lists[label][1]
        S = latgeo.make_polytope(members, label)
        expected = EXPECTED_VOLUMES[label[0]]
        volume = latgeo.integer_volume(S) if len(S.vertices) == S.dim + 1 else latgeo.polytope_volume(S)
        if volume != expected:
            witnesses.append(f"IV({label}) = {volume}, expected {expected}")
        fixture = fx.get(label)
        if fixture is None:
            continue
        origin = members[0]
        basis = [members[k] for k in fixture.basis_positions]
        frame = [latgeo._int_coords(x) for x in [origin] + basis]
        if latgeo._simplex_volume(frame) != 1:
            witnesses.append(f"{label}: chart basis is not unimodular")
        for k, (x, want) in enumerate(zip(members, fixture.coordinates)):
            got = chart_coordinates(origin, basis, x)
            if got != want:
                witnesses.append(f"{label}[{k + 1}]: chart coordinates {got}, expected {want}")
        report = latgeo.validate_triangulation(S, fixture.triangulation(members))
        if not report.ok or not report.unimodular:
            witnesses.append(f"{label}: fixture triangulation rejected: {'; '.join(report.problems) or 'not unimodular'}")
    return CheckResult("c_volumes_charts", not witnesses, f"{len(fundamental_labels(inst.n))} polytopes", witnesses)


def _check_certificates(inst: FamilyInstance) -> CheckResult:
    witnesses = []
    lists = hyperplane_lists(inst)
    for S in family_polytopes(inst, fundamental=False):
        try:
            cert = latgeo.certify_on_sail(S)
        except SailkitError as exc:
            witnesses.append(f"{S.label}: {exc}")
            continue
        if cert.delta != lists[S.label][0]:
            witnesses.append(f"{S.label}: certificate delta {_fmt(cert.delta)} differs from the closed form")
    return CheckResult("d_sail_certificates", not witnesses, f"{len(lists)} polytopes", witnesses)


def matching_window(n: int) -> int:
    return max(2, 6 * n + 2)


def _check_matching(inst: FamilyInstance, polytopes: Sequence[latgeo.IntegerPolytope]) -> Tuple[CheckResult, latgeo.MatchReport]:
    report = latgeo.match_facets(polytopes, list(inst.eps), window=matching_window(inst.n))
    witnesses = [f"unmatched facet {f}" for f in report.unmatched]
    witnesses += [f"facet class with {len(c)} members: {', '.join(c)}" for c in report.overfull]
    witnesses += [f"gluing outside exponent window: {m}" for m in report.outside_window]
    detail = f"{len(report.matches)} gluings"
    return CheckResult("e_face_matching", report.closed, detail, witnesses), report


def class_representatives(inst: FamilyInstance) -> List[FieldElement]:
    return [inst.field.one(), inst.rho] + [inst.gammas[j] for j in range(1, 6 * inst.n + 2)]


def _check_census(inst: FamilyInstance, polytopes: Sequence[latgeo.IntegerPolytope]) -> CheckResult:
    witnesses = []
    lists = hyperplane_lists(inst)
    reps = class_representatives(inst)
    for S in polytopes:
        points = latgeo.lattice_points(S)
        listed = set(lists[S.label][1])
        extra = [p for p in points if p not in listed]
        missing = [x for x in listed if x not in set(points)]
        witnesses += [f"{S.label}: unlisted lattice point {_fmt(p)}" for p in extra]
        witnesses += [f"{S.label}: listed point {_fmt(x)} outside the hull" for x in missing]
        for p in points:
            if not any(are_associates(p, rep) for rep in reps):
                witnesses.append(f"{S.label}: {_fmt(p)} is not a unit translate of 1, rho or gamma_j")
    return CheckResult("f_census", not witnesses, f"{len(reps)} classes", witnesses)


def log_discriminant_window(discriminant: int, bits: Optional[int] = None) -> Tuple[object, object]:
    """Outward-rounded enclosure of log(disc) / (8 log phi)."""
    bits = bits or sailconfig.PRECISION_BITS
    saved = iv.prec
    iv.prec = bits
    try:
        phi = (1 + iv.sqrt(5)) / 2
        q = iv.log(iv.mpf(discriminant)) / (8 * iv.log(phi))
        return q.a, q.b
    finally:
        iv.prec = saved


def _check_iota(inst: FamilyInstance, polytopes: Sequence[latgeo.IntegerPolytope], matching: latgeo.MatchReport) -> Tuple[CheckResult, Optional[int]]:
    witnesses = []
    lists = hyperplane_lists(inst)
    triangulations = {
        label: fx.triangulation(lists[label][1]) for label, fx in fixtures(inst.n).items()
    }
    sail = indecomp.SailData(inst.field, list(polytopes), triangulations, matching, list(inst.eps))
    result = indecomp.sail_certified_iota(sail)
    value = result.count
    expected = 6 * inst.n + 3
    if value != expected:
        witnesses.append(f"sail count {value}, expected {expected}")
    if result.status != "certified (sail)":
        witnesses.append(f"sail status: {result.status}")
    lo, hi = log_discriminant_window(inst.discriminant)
    if not hi <= value:
        witnesses.append(f"log bound: iota = {value} below log(disc)/(8w) <= {hi}")
    if not value <= lo + 1:
        witnesses.append(f"log bound: iota = {value} above log(disc)/(8w) + 1 >= {lo + 1}")
    return CheckResult("g_iota", not witnesses, f"iota = {value}", witnesses), value


def hand_inequalities(n: int) -> CheckResult:
    """(Y sqrt5 - X)(x + y sqrt5) and (X - Y sqrt5)(x - y sqrt5) against 1 +- sqrt5, x, y = x_{2j-1}, y_{2j-1}."""
    F = make_field(Quadratic(5))
    X, Y = _xy(12 * n + 3)
    phi = F.element([Fraction(1, 2), Fraction(1, 2)])
    big = F.element([1, 1])
    small = F.element([-1, 1])
    witnesses = []
    for j in range(1, 6 * n + 2):
        x, y = _xy(2 * j - 1)
        first = F.element([-X, Y]) * F.element([x, y])
        second = F.element([X, -Y]) * F.element([x, -y])
        if first != 4 * power(phi, 2 * j - 12 * n - 4):
            witnesses.append(f"j={j}: first product is not 4 phi^{2 * j - 12 * n - 4}")
        if second != 4 * power(phi, -2 * j - 12 * n - 2):
            witnesses.append(f"j={j}: second product is not 4 phi^{-2 * j - 12 * n - 2}")
        upper, lower = (first, second) if j % 2 else (second, first)
        if sign_at_embedding(big - upper, 0) <= 0:
            witnesses.append(f"j={j}: product not below 1 + sqrt5")
        if sign_at_embedding(small - lower, 0) <= 0:
            witnesses.append(f"j={j}: product not below sqrt5 - 1")
    return CheckResult("h_hand_inequalities", not witnesses, f"{6 * n + 1} indices", witnesses)


def verify_family(n: int, instance: Optional[FamilyInstance] = None, **instance_kwargs) -> VerificationReport:
    """All named checks for K_n; pass instance to verify a modified copy."""
    inst = instance if instance is not None else family_instance(n, **instance_kwargs)
    report = VerificationReport(inst.label, "family", conditional=inst.conditional)
    report.values.update(n=inst.n, p=inst.p, r=inst.r, discriminant=inst.discriminant)
    disc_ok = inst.discriminant == 16 * (5 * inst.p) ** 2 == 16 * (_xy(24 * inst.n + 6)[0] - 3) ** 2
    polytopes = family_polytopes(inst)
    state: Dict[str, object] = {}

    def matching() -> CheckResult:
        result, state["matching"] = _check_matching(inst, polytopes)
        return result

    def iota_check() -> CheckResult:
        match = state.get("matching")
        if match is None or not match.closed:
            return CheckResult("g_iota", False, "face matching unavailable or open")
        result, report.values["iota"] = _check_iota(inst, polytopes, match)
        return result

    def discriminant() -> CheckResult:
        return CheckResult(
            "0_discriminant", disc_ok, f"disc = {inst.discriminant}",
            [] if disc_ok else [f"trace form {inst.discriminant}, closed forms {16 * (5 * inst.p) ** 2}"],
        )

    _run_checks(
        report,
        [
            ("0_discriminant", discriminant),
            ("a_total_positivity", lambda: _check_total_positivity(inst)),
            ("b_trace_incidences", lambda: _check_incidences(inst)),
            ("c_volumes_charts", lambda: _check_volumes_and_charts(inst)),
            ("d_sail_certificates", lambda: _check_certificates(inst)),
            ("e_face_matching", matching),
            ("f_census", lambda: _check_census(inst, polytopes)),
            ("g_iota", iota_check),
            ("h_hand_inequalities", lambda: hand_inequalities(inst.n)),
        ],
    )
    logger.info(f"{inst.label}: {'PASS' if report.passed else 'FAIL'} ({len(report.failed())} failed checks)")
    return report


# ---------------------------------------------------------------------------
# Shanks' simplest cubic fields
# ---------------------------------------------------------------------------
def shanks_faces(field: Field) -> Tuple[latgeo.IntegerPolytope, latgeo.IntegerPolytope]:
    rho = field.rho
    eps1 = rho * rho
    eps2 = (rho + 1) * (rho + 1)
    one = field.one()
    A1 = latgeo.make_polytope([one, eps1, eps2], "A1")
    A2 = latgeo.make_polytope([one, eps1, eps1 * power(eps2, -1)], "A2")
    return A1, A2


def shanks_sail(field: Field) -> indecomp.SailData:
    """Faces A1 and A2 glued by eps1 and eps2."""
    rho = field.rho
    eps1, eps2 = rho * rho, (rho + 1) * (rho + 1)
    faces = list(shanks_faces(field))
    match = latgeo.match_facets(faces, [eps1, eps2])
    return indecomp.SailData(field, faces, {}, match, [eps1, eps2])


def shanks_iota_formula(a: int) -> int:
    return (a * a + 3 * a + 6) // 2


def shanks_iota_bruteforce(a: int, bound: Optional[int] = None) -> int:
    field = make_field(SimplestCubic(a))
    return indecomp.bruteforce_indecomposables(field, bound).count


def shanks_verify(a: int, bruteforce: bool = False, assume_monogenic: bool = False) -> VerificationReport:
    """Sail faces, interior counts and iota of the simplest cubic field with parameter a."""
    field = make_field(SimplestCubic(a, assume_monogenic))
    rho = field.rho
    eps1, eps2 = rho * rho, (rho + 1) * (rho + 1)
    A1, A2 = shanks_faces(field)
    q = a * a + 3 * a + 3
    report = VerificationReport(f"shanks a={a}", "shanks", conditional=assume_monogenic)
    report.values.update(a=a, discriminant=field.discriminant, expected_iota=shanks_iota_formula(a))

    def quotient() -> CheckResult:
        closed = field.element([-(a + 1), -q, a + 2])
        got = eps1 * power(eps2, -1)
        return CheckResult("a_unit_quotient", got == closed, f"eps1/eps2 = {_fmt(got)}",
                           [] if got == closed else [f"closed form {_fmt(closed)}"])

    def distances_volumes() -> CheckResult:
        got = (latgeo.integer_distance(A1), latgeo.integer_distance(A2),
               latgeo.integer_volume(A1), latgeo.integer_volume(A2))
        want = (2, 1, 1, q)
        return CheckResult("b_id_iv", got == want, f"(ID1, ID2, IV1, IV2) = {got}",
                           [] if got == want else [f"expected {want}"])

    def interior() -> CheckResult:
        got = (indecomp.iota_int_exact_cubic(A1), indecomp.iota_int_exact_cubic(A2))
        # both raise CountMismatch if enumeration disagrees with IV * ID - 1
        latgeo.parallelepiped_lattice_count(A1)
        latgeo.parallelepiped_lattice_count(A2)
        off_sail = latgeo.off_face_points(A1)
        enumerated = (len(off_sail), len(latgeo.off_face_points(A2)))
        witnesses = []
        if got != (1, 0):
            witnesses.append(f"interior counts {got}, expected (1, 0)")
        if enumerated != got:
            witnesses.append(f"off-face parallelepiped points {enumerated}")
        expected = field.element([1, 1, 1])
        if off_sail != [expected] or not indecomp.is_indecomposable(expected):
            witnesses.append(f"off-sail points {[_fmt(x) for x in off_sail]}, expected [1 + rho + rho^2]")
        return CheckResult("c_interior_counts", not witnesses, f"iota_int = {got}", witnesses)

    def pick() -> CheckResult:
        boundary, inner = latgeo.lattice_points_on_face(A2)
        want = (a * a + 3 * a + 2) // 2
        return CheckResult("d_pick", inner == want, f"A2: {boundary} boundary, {inner} interior",
                           [] if inner == want else [f"expected {want} interior points"])

    state: Dict[str, object] = {}

    def matching() -> CheckResult:
        match = latgeo.match_facets([A1, A2], [eps1, eps2])
        state["matching"] = match
        witnesses = [f"unmatched facet {f}" for f in match.unmatched]
        witnesses += [f"overfull class {', '.join(c)}" for c in match.overfull]
        return CheckResult("e_edge_matching", match.closed, f"{len(match.matches)} gluings", witnesses)

    def iota_check() -> CheckResult:
        match = state.get("matching")
        if match is None or not match.closed:
            return CheckResult("f_iota", False, "edge matching unavailable or open")
        result = indecomp.sail_certified_iota(indecomp.SailData(field, [A1, A2], {}, match, [eps1, eps2]))
        report.values["iota"] = result.count
        want = shanks_iota_formula(a)
        return CheckResult("f_iota", result.count == want, f"iota = {result.count} ({result.status})",
                           [] if result.count == want else [f"expected {want}"])

    def brute() -> CheckResult:
        value = shanks_iota_bruteforce(a)
        report.values["iota_bruteforce"] = value
        want = shanks_iota_formula(a)
        return CheckResult("g_bruteforce", value == want, f"brute force iota = {value}",
                           [] if value == want else [f"expected {want}"])

    checks = [
        ("a_unit_quotient", quotient),
        ("b_id_iv", distances_volumes),
        ("c_interior_counts", interior),
        ("d_pick", pick),
        ("e_edge_matching", matching),
        ("f_iota", iota_check),
    ]
    if bruteforce:
        checks.append(("g_bruteforce", brute))
    _run_checks(report, checks)
    return report


# ---------------------------------------------------------------------------
# Rank bounds
# ---------------------------------------------------------------------------
C12_OVERRIDE = 264
C12_OVERRIDE_SOURCE = "Kitaoka: a lattice of rank at most 12 has at most 264 vectors of norm 2"


def C(R: int, m: int, override: bool = False) -> int:
    """Upper bound on the number of vectors of norm m in a rank-R lattice."""
    if R < 1 or m < 2:
        raise DegenerateInput(f"C(R, m) needs R >= 1 and m >= 2, got ({R}, {m})")
    if m == 2:
        if override and R <= 12:
            return C12_OVERRIDE
        return max(480, 2 * R * (R - 1))
    return 2 * math.comb(R + 2 * m - 2, 2 * m - 1)


def is_rank_admissible(u: int, R: int, classical: bool = True, override: bool = False) -> bool:
    """u + 1 <= C(4R, 2)/2 (classical) or C(4R, 4)/2."""
    return 2 * (u + 1) <= C(4 * R, 2 if classical else 4, override)


def rank_lower_bound(u: int, classical: bool = True, override: bool = False) -> int:
    """Least R for which a universal lattice of rank R is not excluded by u."""
    if u < 1:
        raise DegenerateInput(f"u must be positive, got {u}")
    R = 1
    while not is_rank_admissible(u, R, classical, override):
        R += 1
    return R


@dataclass(frozen=True)
class KitaokaBound:
    R: int
    classical: bool
    override: bool
    u_max: int
    floor_max: int
    sqrt_bound: int

    def to_json(self) -> dict:
        data = {
            "R": self.R,
            "classical": self.classical,
            "override": self.override,
            "u_max": self.u_max,
            "floor_max": self.floor_max,
            "sqrt_bound": self.sqrt_bound,
        }
        if self.override:
            data["override_source"] = C12_OVERRIDE_SOURCE
        return data


def kitaoka_bound(R: int = 3, classical: bool = True, override: bool = True) -> KitaokaBound:
    """Rank R forces u <= u_max, floor(-conj omega_D) <= u_max // 2 and sqrt D < sqrt_bound."""
    u_max = C(4 * R, 2 if classical else 4, override) // 2 - 1
    floor_max = u_max // 2
    # floor((sqrt D - 1)/2) <= f gives sqrt D < 2f + 3, which also covers floor(sqrt D) <= f
    return KitaokaBound(R, classical, override, u_max, floor_max, 2 * floor_max + 3)


@dataclass(frozen=True)
class UsrBound:
    D1: int
    D2: int
    sgnrk: int
    radicand: int
    u: int
    R_cls_min: int
    R_min: int
    override: bool
    u_exceeds_sqrt_minus_3: bool

    def to_json(self) -> dict:
        return {
            "D1": self.D1,
            "D2": self.D2,
            "sgnrk": self.sgnrk,
            "radicand": self.radicand,
            "u": self.u,
            "R_cls_min": self.R_cls_min,
            "R_min": self.R_min,
            "override": self.override,
            "u_exceeds_sqrt_minus_3": self.u_exceeds_sqrt_minus_3,
        }


def usr_lower_bound(D1: int, D2: int, override: bool = False) -> UsrBound:
    """Rank lower bounds for universal lattices over Q(sqrt D1, sqrt D2) when sgnrk >= 3."""
    field = make_field(Biquadratic(D1, D2))
    sgnrk = units.field_signature_rank(field)
    if sgnrk <= 2:
        raise NotApplicable(f"signature rank {sgnrk} <= 2 for {field.descriptor.label}")
    D = max(field.radicands[1:])
    u = cfrac.max_partial_quotient(D)
    return UsrBound(
        D1,
        D2,
        sgnrk,
        D,
        u,
        rank_lower_bound(u, classical=True, override=override),
        rank_lower_bound(u, classical=False, override=override),
        override,
        (u + 3) ** 2 > D,
    )
