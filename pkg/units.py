#!/usr/bin/env python3
"""
UNITS - FUNDAMENTAL UNITS AND SIGNATURE RANKS OF REAL BIQUADRATIC FIELDS
========================================================================

PURPOSE:
--------
K = Q(sqrt D1, sqrt D2) has quadratic subfields K_i = Q(sqrt D_i), i = 1..3,
with fundamental units eps_i > 1. Kubota's classification says which
radicals of products of the eps_i lie in K; this module decides the case,
builds the radicals exactly and derives the unit signature rank.

CASES:
------
Some N(eps_i) = +1 (case 1): a radical sqrt(prod eps_i^{m_i}) with m_i in
{0, 1} supported on norm +1 indices exists iff d_eta, the product of the
marks d_{K_i}(eps_i^{m_i}), has squarefree part c in {1, D1, D2, D3}. Its
signature is that of sqrt c.

    1.i    eps1, eps2, eps3
    1.ii   sqrt eps1, eps2, eps3
    1.iii  sqrt eps1, sqrt eps2, eps3
    1.iv   sqrt(eps1 eps2), eps2, eps3
    1.v    sqrt(eps1 eps2), sqrt eps3, eps2
    1.vi   sqrt(eps1 eps2), sqrt(eps2 eps3), sqrt(eps3 eps1)
    1.vii  sqrt(eps1 eps2 eps3), eps2, eps3

Every N(eps_i) = -1 (case 2): eps1 eps2 eps3 is a square iff the trace of
any xi_j is a square in K.

    2.i    eps1, eps2, eps3
    2.ii   sqrt(eps1 eps2 eps3), eps2, eps3

The numbering above is up to relabelling; UnitSystem.permutation records
which subfield plays the role of eps_k in the printed case.

SIGNATURES:
-----------
sgn(sqrt D1) = (0,1,0,1), sgn(sqrt D2) = (0,0,1,1), sgn(sqrt D3) = (0,1,1,0)
in the embedding order of field_core.
"""

import itertools
import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import iv

import cfrac
import intlattice
from field_core import (
    Biquadratic,
    Field,
    FieldElement,
    SignatureVector,
    embed_quadratic_subfield_element,
    embedding_interval,
    f2_rank,
    galois_conjugate,
    is_integral,
    is_totally_positive,
    make_field,
    norm,
    numeric_embeddings,
    power,
    signature,
    split_square,
    square_root,
    squarefree_part,
    trace,
)
from sail_errors import DegenerateInput, NoSuchUnit, WrongFieldKind, WrongNorm

logger = logging.getLogger(__name__)

# generators of each case as exponent vectors m, generator = sqrt(prod eps_k^{m_k})
CASE_EXPONENTS: Dict[str, Tuple[Tuple[int, int, int], ...]] = {
    "1.i": ((2, 0, 0), (0, 2, 0), (0, 0, 2)),
    "1.ii": ((1, 0, 0), (0, 2, 0), (0, 0, 2)),
    "1.iii": ((1, 0, 0), (0, 1, 0), (0, 0, 2)),
    "1.iv": ((1, 1, 0), (0, 2, 0), (0, 0, 2)),
    "1.v": ((1, 1, 0), (0, 0, 1), (0, 2, 0)),
    "1.vi": ((1, 1, 0), (0, 1, 1), (1, 0, 1)),
    "1.vii": ((1, 1, 1), (0, 2, 0), (0, 0, 2)),
    "2.i": ((2, 0, 0), (0, 2, 0), (0, 0, 2)),
    "2.ii": ((1, 1, 1), (0, 2, 0), (0, 0, 2)),
}

MINUS_ONE = SignatureVector((1, 1, 1, 1))


@dataclass(frozen=True)
class SquarefreeMark:
    d: int

    def __post_init__(self):
        if self.d < 1 or squarefree_part(self.d) != self.d:
            raise DegenerateInput(f"mark {self.d} is not a positive squarefree integer")


@dataclass
class UnitSystem:
    field: Field
    generators: List[FieldElement]
    case_label: str
    norms: List[int]
    quadratic_units: List[FieldElement]
    exponents: List[Tuple[int, int, int]]
    permutation: Tuple[int, int, int] = (1, 2, 3)
    radical_marks: List[Optional[int]] = dataclass_field(default_factory=list)
    trace_square_test: Optional[List[Fraction]] = None

    def signatures(self) -> List[SignatureVector]:
        out = []
        for g, m, c in zip(self.generators, self.exponents, self.radical_marks):
            if c is None:
                out.append(signature(g))
            else:
                out.append(_radical_signature_from_mark(self, m, c))
        return out

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor.to_json(),
            "case": self.case_label,
            "permutation": list(self.permutation),
            "norms": self.norms,
            "generators": [[str(c) for c in g.coords] for g in self.generators],
            "exponents": [list(m) for m in self.exponents],
            "radical_marks": self.radical_marks,
            "trace_square_test": None if self.trace_square_test is None else [str(t) for t in self.trace_square_test],
        }


# ---------------------------------------------------------------------------
# Marks and rational squares
# ---------------------------------------------------------------------------
def _require_biquadratic(field: Field) -> None:
    if field.kind != "biquadratic":
        raise WrongFieldKind(f"{field.descriptor.label} is not biquadratic")


def d_F(eps: FieldElement) -> SquarefreeMark:
    """Squarefree d with d eps a square in F, for a norm +1 unit eps of a quadratic F."""
    return SquarefreeMark(_mark_and_root(eps)[0])


def sqrt_d_epsilon(eps: FieldElement) -> FieldElement:
    """The totally positive sqrt(d_F(eps) eps) = (eps + 1) / f."""
    return _mark_and_root(eps)[1]


def _mark_and_root(eps: FieldElement) -> Tuple[int, FieldElement]:
    if eps.field.kind != "quadratic":
        raise WrongFieldKind("d_F is defined for units of quadratic fields")
    if norm(eps) != 1:
        raise WrongNorm(f"d_F needs norm +1, got norm {norm(eps)} for {eps}")
    shifted = eps + 1
    T = trace(shifted)
    if shifted * shifted != eps * T:
        raise DegenerateInput(f"Tr(eps+1) eps != (eps+1)^2 for {eps}")
    d, f = split_square(T)
    # d f^2 = T, so d eps = (eps+1)^2 / f^2
    root = shifted / f
    if not is_totally_positive(root):
        raise DegenerateInput(f"sqrt(d eps) = {root} is not totally positive")
    return d, root


def is_rational_square_in(field: Field, q: Fraction) -> bool:
    """q in K^2 for rational q: zero, or positive with squarefree part in {1, D1, D2, D3}."""
    q = Fraction(q)
    if q == 0:
        return True
    if q < 0:
        return False
    return squarefree_part(q.numerator * q.denominator) in field.radicands


def _sqrt_of_radicand(field: Field, c: int) -> FieldElement:
    k = field.radicands.index(c)
    return field.basis_element(k)


def radical_signature(field: Field, c: int) -> SignatureVector:
    """sgn(sqrt c) for c in {1, D1, D2, D3}."""
    _require_biquadratic(field)
    k = field.radicands.index(c)
    return SignatureVector(tuple(1 if signs[k] < 0 else 0 for signs in field._signs))


# ---------------------------------------------------------------------------
# Subfield units
# ---------------------------------------------------------------------------
def _quadratic_units(field: Field) -> Tuple[List[FieldElement], List[FieldElement], List[int]]:
    """(units in K_i, lifts to K, norms) for i = 1..3."""
    local, lifted, norms = [], [], []
    for i in (1, 2, 3):
        eps, n = cfrac.fundamental_unit(field.radicands[i])
        local.append(eps)
        lifted.append(embed_quadratic_subfield_element(field, i, eps.coords[0], eps.coords[1]))
        norms.append(n)
    return local, lifted, norms


def _product(field: Field, units: Sequence[FieldElement], exps: Sequence[int]) -> FieldElement:
    out = field.one()
    for u, e in zip(units, exps):
        if e:
            out = out * power(u, e)
    return out


# ---------------------------------------------------------------------------
# Square tests
# ---------------------------------------------------------------------------
def square_test_traces(eps1: FieldElement, eps2: FieldElement, eps3: FieldElement) -> dict:
    """Traces of xi_0..xi_3 and whether eps1 eps2 eps3 is a square in K."""
    field = eps1.field
    _require_biquadratic(field)
    prod = eps1 * eps2 * eps3
    xis = [
        prod + eps1 + eps2 - eps3,
        prod + eps1 - eps2 + eps3,
        prod - eps1 + eps2 + eps3,
        prod - eps1 - eps2 - eps3,
    ]
    traces = [trace(x) for x in xis]
    verdicts = [is_rational_square_in(field, t) for t in traces]
    if len(set(verdicts)) != 1:
        logger.warning(f"xi traces disagree on squareness in {field.descriptor.label}: {traces}")
    return {"traces": traces, "square": any(verdicts), "verdicts": verdicts}


def _case_one_radicals(field: Field, local: Sequence[FieldElement], lifted: Sequence[FieldElement], norms: Sequence[int]):
    """Map each m in {0,1}^3 on norm +1 indices with prod eps^m in K^2 to (c, sqrt)."""
    marks = {}
    roots = {}
    for k in range(3):
        if norms[k] == 1:
            d, r = _mark_and_root(local[k])
            marks[k] = d
            roots[k] = embed_quadratic_subfield_element(field, k + 1, r.coords[0], r.coords[1])
    found = {}
    free = [k for k in range(3) if norms[k] == 1]
    for bits in itertools.product((0, 1), repeat=len(free)):
        m = [0, 0, 0]
        for k, b in zip(free, bits):
            m[k] = b
        m = tuple(m)
        d_eta = 1
        numerator = field.one()
        for k in range(3):
            if m[k]:
                d_eta *= marks[k]
                numerator = numerator * roots[k]
        c, f = split_square(Fraction(d_eta))
        if c not in field.radicands:
            continue
        # sqrt(eta) = prod sqrt(d_k eps_k) / (f sqrt c)
        root = numerator / (_sqrt_of_radicand(field, c) * f)
        if root * root != _product(field, lifted, m):
            raise DegenerateInput(f"radical for m={m} does not square to the unit in {field.descriptor.label}")
        found[m] = (c, root)
    return found


def _match_case(support: Sequence[Tuple[int, int, int]]) -> Tuple[str, Tuple[int, int, int]]:
    """Kubota case label and relabelling for the nonzero square classes."""
    target = frozenset(m for m in support if any(m))
    for label in ("1.i", "1.ii", "1.iii", "1.iv", "1.v", "1.vi", "1.vii"):
        exps = CASE_EXPONENTS[label]
        canon = set()
        for bits in itertools.product((0, 1), repeat=3):
            v = tuple(sum(b * e[k] for b, e in zip(bits, exps)) % 2 for k in range(3))
            if any(v):
                canon.add(v)
        for perm in itertools.permutations(range(3)):
            # canonical position k is played by original index perm[k]
            mapped = frozenset(tuple(m[perm[k]] for k in range(3)) for m in target)
            if mapped == canon:
                return label, tuple(p + 1 for p in perm)
    raise DegenerateInput(f"square classes {sorted(target)} match no case of the classification")


def _radical_signature_from_mark(system: UnitSystem, m: Sequence[int], c: int) -> SignatureVector:
    """sgn of sqrt(prod eps^m) from the mark c of its odd part."""
    sig = radical_signature(system.field, c)
    for k in range(3):
        half = (m[k] - (m[k] % 2)) // 2
        if half % 2:
            sig = sig + signature(system.quadratic_units[k])
    return sig


# ---------------------------------------------------------------------------
# Unit systems
# ---------------------------------------------------------------------------
def _build_generator(field, lifted, m, odd_roots) -> FieldElement:
    s = tuple(v % 2 for v in m)
    half = tuple((v - sv) // 2 for v, sv in zip(m, s))
    g = _product(field, lifted, half)
    if any(s):
        g = g * odd_roots[s]
    return g


@lru_cache(maxsize=None)
def kubota_unit_system(D1: int, D2: int) -> UnitSystem:
    """A fundamental system of units of Q(sqrt D1, sqrt D2) with its case label."""
    field = make_field(Biquadratic(D1, D2))
    local, lifted, norms = _quadratic_units(field)
    trace_test = None
    if all(n == -1 for n in norms):
        trace_test = square_test_traces(*lifted)
        odd_roots = {}
        if trace_test["square"]:
            root = square_root(lifted[0] * lifted[1] * lifted[2])
            if root is None:
                raise DegenerateInput(f"xi traces say eps1 eps2 eps3 is a square in {field.descriptor.label} but no root exists")
            odd_roots[(1, 1, 1)] = root
            label = "2.ii"
        else:
            label = "2.i"
        perm = (1, 2, 3)
        marks_by_s = {}
    else:
        radicals = _case_one_radicals(field, local, lifted, norms)
        label, perm = _match_case(list(radicals))
        odd_roots = {m: r for m, (_, r) in radicals.items()}
        marks_by_s = {m: c for m, (c, _) in radicals.items()}
    generators, exponents, marks = [], [], []
    for canon in CASE_EXPONENTS[label]:
        m = [0, 0, 0]
        for k in range(3):
            m[perm[k] - 1] = canon[k]
        m = tuple(m)
        generators.append(_build_generator(field, lifted, m, odd_roots))
        exponents.append(m)
        s = tuple(v % 2 for v in m)
        marks.append(marks_by_s.get(s) if any(s) else None)
    for g in generators:
        if not (is_integral(g) and abs(norm(g)) == 1):
            raise DegenerateInput(f"generator {g} of {field.descriptor.label} is not a unit")
    system = UnitSystem(
        field=field,
        generators=generators,
        case_label=label,
        norms=norms,
        quadratic_units=lifted,
        exponents=exponents,
        permutation=perm,
        radical_marks=marks,
        trace_square_test=None if trace_test is None else trace_test["traces"],
    )
    logger.debug(f"{field.descriptor.label}: case {label}, norms {norms}, permutation {perm}")
    return system


def _system_for(field: Field) -> UnitSystem:
    _require_biquadratic(field)
    return kubota_unit_system(field.descriptor.D1, field.descriptor.D2)


def signature_rank(D1: int, D2: int) -> Tuple[int, List[SignatureVector]]:
    """(rank over F_2 of the unit signatures, an independent set spanning them)."""
    system = kubota_unit_system(D1, D2)
    basis: List[SignatureVector] = []
    for sig in [MINUS_ONE] + system.signatures():
        if f2_rank([b.bits for b in basis + [sig]]) > len(basis):
            basis.append(sig)
    return len(basis), basis


def field_signature_rank(field: Field) -> int:
    _require_biquadratic(field)
    return signature_rank(field.descriptor.D1, field.descriptor.D2)[0]


# ---------------------------------------------------------------------------
# Checks and searches
# ---------------------------------------------------------------------------
def verify_unit_norms(field: Field) -> dict:
    """Norm and Galois identities for the generators; all norms are +1 when sgnrk <= 3."""
    system = _system_for(field)
    rank = field_signature_rank(field)
    norms = [int(norm(g)) for g in system.generators]
    galois_ok = True
    for g in system.generators:
        s1, s2, s3 = (galois_conjugate(g, i) for i in (1, 2, 3))
        if s3 != galois_conjugate(s1, 2):
            galois_ok = False
        if g * s1 * s2 * s3 != norm(g):
            galois_ok = False
    applies = rank <= 3
    holds = (not applies) or all(n == 1 for n in norms)
    if not (holds and galois_ok):
        logger.warning(f"{field.descriptor.label}: norm check failed, sgnrk={rank}, norms={norms}")
    return {"sgnrk": rank, "applies": applies, "norms": norms, "holds": holds, "galois_identities": galois_ok}


verify_lemma_un1 = verify_unit_norms


def find_unit_with_radical_signature(field: Field, i: int) -> FieldElement:
    """A unit eta with sgn(eta) = sgn(sqrt D_i)."""
    system = _system_for(field)
    target = radical_signature(field, field.radicands[i])
    sigs = [MINUS_ONE] + system.signatures()
    units = [field.one() * -1] + system.generators
    for bits in itertools.product((0, 1), repeat=len(sigs)):
        total = SignatureVector((0, 0, 0, 0))
        for b, s in zip(bits, sigs):
            if b:
                total = total + s
        if total == target:
            eta = field.one()
            for b, u in zip(bits, units):
                if b:
                    eta = eta * u
            if signature(eta) != target:
                raise DegenerateInput(f"signature bookkeeping failed for {eta}")
            return eta
    rank = field_signature_rank(field)
    if rank >= 3:
        logger.error(f"{field.descriptor.label}: no unit with the signature of sqrt D{i} although sgnrk={rank}")
    raise NoSuchUnit(f"no unit of {field.descriptor.label} has the signature of sqrt {field.radicands[i]}")


def exhaustive_signature_rank(D1: int, D2: int, box: int = 4) -> int:
    """Signature rank found by brute force over +-prod eps_i^{a_i}, |a_i| <= box, and their square roots."""
    field = make_field(Biquadratic(D1, D2))
    _, lifted, _ = _quadratic_units(field)
    found = {MINUS_ONE}
    for exps in itertools.product(range(-box, box + 1), repeat=3):
        eta = _product(field, lifted, exps)
        found.add(signature(eta))
        if all(0 <= e <= 1 for e in exps) and any(exps):
            root = square_root(eta)
            if root is not None:
                found.add(signature(root))
    return f2_rank([s.bits for s in found])


def log_abs_interval(alpha: FieldElement, i: int, bits: int = 96):
    lo, hi = embedding_interval(alpha, i, bits)
    if lo <= 0 <= hi:
        raise DegenerateInput(f"embedding {i + 1} of {alpha} not separated from zero")
    if hi < 0:
        lo, hi = -hi, -lo
    lower = mpmath.fdiv(lo.numerator, lo.denominator, prec=bits, rounding="f")
    upper = mpmath.fdiv(hi.numerator, hi.denominator, prec=bits, rounding="c")
    return iv.log(iv.mpf([lower, upper]))


def unit_index_check(field: Field) -> dict:
    """Independence of the system (interval log determinant) and 2-saturation (exact square roots)."""
    system = _system_for(field)
    rows = [[log_abs_interval(g, j) for j in range(3)] for g in system.generators]
    (a, b, c), (d, e, f), (g, h, k) = rows
    det = a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)
    independent = 0 not in det
    logs = mpmath.matrix([[mpmath.log(abs(v)) for v in numeric_embeddings(g)[:3]] for g in system.generators])
    saturated = True
    for bits in itertools.product((0, 1), repeat=3):
        if not any(bits):
            continue
        eta = _product(field, system.generators, bits)
        for sign in (1, -1):
            if square_root(eta * sign) is not None:
                saturated = False
                logger.warning(f"{field.descriptor.label}: {'+-'[sign < 0]}g^{bits} is a square")
    return {
        "independent": independent,
        "two_saturated": saturated,
        "regulator": float(abs(mpmath.det(logs))),
        "index_one": independent and saturated,
    }


@lru_cache(maxsize=None)
def totally_positive_unit_generators(field: Field) -> List[FieldElement]:
    """Three generators of the totally positive units of a biquadratic field."""
    system = _system_for(field)
    sigs = system.signatures()
    rows = [(2, 0, 0), (0, 2, 0), (0, 0, 2)]
    for bits in itertools.product((0, 1), repeat=3):
        total = SignatureVector((0, 0, 0, 0))
        for b, s in zip(bits, sigs):
            if b:
                total = total + s
        if total.is_zero or total == MINUS_ONE:
            rows.append(bits)
    basis = intlattice.hermite_basis(rows)
    out = []
    for e in basis:
        u = _product(field, system.generators, e)
        if signature(u) == MINUS_ONE:
            u = -u
        if not is_totally_positive(u):
            raise DegenerateInput(f"lattice vector {e} gives a unit that is not totally positive")
        out.append(u)
    return out
