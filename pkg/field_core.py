#!/usr/bin/env python3
"""
FIELD CORE - EXACT ARITHMETIC IN TOTALLY REAL FIELDS OF DEGREE 2, 3 AND 4
========================================================================

PURPOSE:
--------
Exact arithmetic, embeddings, signatures, traces, norms, integrality and
codifferent membership for three field families:

- Quadratic(D)          Q(sqrt D),            Q-basis (1, sqrt D)
- Biquadratic(D1, D2)   Q(sqrt D1, sqrt D2),  Q-basis (1, sqrt D1, sqrt D2, sqrt D3)
- SimplestCubic(a)      Q(rho), rho the largest root of x^3 - a x^2 - (a+3) x - 1,
                        Q-basis (1, rho, rho^2)

Elements are vectors of Fractions in the Q-basis above. Nothing in this
module uses floating point to decide anything: signs come from rational
interval enclosures that are refined until they exclude zero, and a zero
element is recognised from its coordinates.

EMBEDDING ORDER:
---------------
Embeddings are indexed from 0 in code (reports print them as tau1..taun).

- Quadratic:   tau1: sqrt D -> +sqrt D,  tau2: sqrt D -> -sqrt D
- Biquadratic: signs taken by (sqrt D1, sqrt D2, sqrt D3)
               tau1 (+,+,+)  tau2 (-,+,-)  tau3 (+,-,-)  tau4 (-,-,+)
- Cubic:       roots in decreasing order, tau1(rho) is the largest root

INTEGRAL BASIS:
--------------
Quadratic and biquadratic bases are computed, not looked up: every candidate
c/2 (resp. c/4) with c in a box of residues is tested for integrality through
the Newton power sums of its characteristic polynomial, and the lattice they
generate is put in reduced lower-triangular Hermite form. For the Q(sqrt 5,
sqrt p) family this reproduces {1, (1+sqrt 5)/2, sqrt p, (sqrt p + sqrt r)/2}.
The simplest cubic uses {1, rho, rho^2}, which needs Z[rho] = O_K; that holds
when a^2+3a+9 is squarefree, other a need assume_monogenic=True.

CONFIGURATION:
-------------
sailconfig.PRECISION_BITS starts interval refinement, MAX_PRECISION_BITS caps
it, BOX_CAP limits box enumerations.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath
from sympy import Matrix, Poly, Rational, discriminant, factorint, symbols

import intlattice
import sailconfig
from sail_errors import (
    BoxTooLarge,
    DegenerateBiquadratic,
    DegenerateInput,
    DivisionByZero,
    MonogenicityUnknown,
    NonSquarefree,
    PrecisionExhausted,
    WrongFieldKind,
)

logger = logging.getLogger(__name__)

# precision used by the box enumerator's fast interval filter
_BOX_BITS = 64


# ---------------------------------------------------------------------------
# Integer utilities
# ---------------------------------------------------------------------------
def is_squarefree(n: int, tester: Optional[Callable[[int], bool]] = None) -> bool:
    """Squarefree test; a caller-supplied tester replaces the default factorisation."""
    if tester is not None:
        return bool(tester(n))
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def squarefree_part(n: int) -> int:
    """The squarefree s with n = s * m^2; the sign of n stays on s."""
    if n == 0:
        raise DegenerateInput("squarefree part of 0")
    s = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s


def split_square(q: Fraction) -> Tuple[int, Fraction]:
    """Write a nonzero rational q as c * g^2 with c a squarefree integer and g > 0."""
    q = Fraction(q)
    m = q.numerator * q.denominator
    c = squarefree_part(m)
    g = Fraction(math.isqrt(m // c), q.denominator)
    return c, g


def _lcm_denominator(values: Sequence[Fraction]) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Quadratic:
    D: int
    kind = "quadratic"

    def to_json(self) -> dict:
        return {"kind": self.kind, "D": self.D}

    @property
    def label(self) -> str:
        return f"Q(sqrt {self.D})"


@dataclass(frozen=True)
class Biquadratic:
    D1: int
    D2: int
    kind = "biquadratic"

    def to_json(self) -> dict:
        return {"kind": self.kind, "D1": self.D1, "D2": self.D2}

    @property
    def label(self) -> str:
        return f"Q(sqrt {self.D1}, sqrt {self.D2})"


@dataclass(frozen=True)
class SimplestCubic:
    a: int
    assume_monogenic: bool = False
    kind = "cubic"

    def to_json(self) -> dict:
        data = {"kind": self.kind, "a": self.a}
        if self.assume_monogenic:
            data["assume_monogenic"] = True
        return data

    @property
    def label(self) -> str:
        return f"simplest cubic a={self.a}"


FieldDescriptor = Union[Quadratic, Biquadratic, SimplestCubic]


def descriptor_from_json(data: dict) -> FieldDescriptor:
    kind = data.get("kind")
    if kind == "quadratic":
        return Quadratic(int(data["D"]))
    if kind == "biquadratic":
        return Biquadratic(int(data["D1"]), int(data["D2"]))
    if kind == "cubic":
        return SimplestCubic(int(data["a"]), bool(data.get("assume_monogenic", False)))
    raise WrongFieldKind(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SignatureVector:
    """Sign pattern in F_2^n: 0 for a positive embedding, 1 for a negative one."""

    bits: Tuple[int, ...]

    def __add__(self, other: "SignatureVector") -> "SignatureVector":
        return SignatureVector(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)

    def __str__(self) -> str:
        return "(" + ",".join("-" if b else "+" for b in self.bits) + ")"

    def to_json(self) -> List[int]:
        return list(self.bits)


def f2_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over F_2 of 0/1 vectors."""
    rows = [int("".join(str(b & 1) for b in v), 2) for v in vectors]
    rank = 0
    while rows:
        pivot = max(rows)
        if pivot == 0:
            break
        rows.remove(pivot)
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------
class Field:
    """Immutable field data; build through make_field so instances are shared."""

    def __init__(self, descriptor: FieldDescriptor):
        self.descriptor = descriptor
        self.kind = descriptor.kind
        if self.kind == "quadratic":
            self._init_quadratic(descriptor)
        elif self.kind == "biquadratic":
            self._init_biquadratic(descriptor)
        else:
            self._init_cubic(descriptor)
        self.degree = len(self._products)
        self._trace_vector = self._compute_trace_vector()
        self.integral_basis = self._compute_integral_basis()
        rows = [list(b.coords) for b in self.integral_basis]
        inverse = Matrix([[Rational(c.numerator, c.denominator) for c in r] for r in rows]).inv()
        self._basis_inverse = [[_fraction(inverse[i, j]) for j in range(self.degree)] for i in range(self.degree)]
        gram = Matrix(self.degree, self.degree, lambda i, j: _sym(trace(self.integral_basis[i] * self.integral_basis[j])))
        self._trace_form = gram
        self.discriminant = int(gram.det())
        self._verify_discriminant(rows)
        logger.debug(f"built {descriptor.label}: basis {[str(b) for b in self.integral_basis]}, disc {self.discriminant}")

    def __reduce__(self):
        return (make_field, (self.descriptor,))

    def __repr__(self) -> str:
        return f"Field({self.descriptor.label})"

    # -- construction helpers -------------------------------------------------
    def _init_quadratic(self, desc: Quadratic) -> None:
        D = desc.D
        if D <= 1 or not is_squarefree(D):
            raise NonSquarefree(D)
        self.radicands = (1, D)
        self._products = [
            [((0, 1),), ((1, 1),)],
            [((1, 1),), ((0, D),)],
        ]
        self._signs = ((1, 1), (1, -1))
        self.embedding_convention = ["tau1: sqrt D -> +", "tau2: sqrt D -> -"]

    def _init_biquadratic(self, desc: Biquadratic) -> None:
        D1, D2 = desc.D1, desc.D2
        for D in (D1, D2):
            if D <= 1 or not is_squarefree(D):
                raise NonSquarefree(D)
        if D1 == D2:
            raise DegenerateBiquadratic(f"D1 = D2 = {D1}")
        g = math.gcd(D1, D2)
        D3 = D1 * D2 // (g * g)
        if D3 in (1, D1, D2):
            raise DegenerateBiquadratic(f"derived D3 = {D3} coincides with a radicand")
        self.radicands = (1, D1, D2, D3)
        self.gcd12 = g
        P = [[None] * 4 for _ in range(4)]
        for k in range(4):
            P[0][k] = P[k][0] = ((k, 1),)
        P[1][1] = ((0, D1),)
        P[2][2] = ((0, D2),)
        P[3][3] = ((0, D3),)
        P[1][2] = P[2][1] = ((3, g),)
        P[1][3] = P[3][1] = ((2, D1 // g),)
        P[2][3] = P[3][2] = ((1, D2 // g),)
        self._products = P
        self._signs = ((1, 1, 1, 1), (1, -1, 1, -1), (1, 1, -1, -1), (1, -1, -1, 1))
        self.embedding_convention = [
            "tau1: (sqrt D1, sqrt D2, sqrt D3) -> (+,+,+)",
            "tau2: (-,+,-)",
            "tau3: (+,-,-)",
            "tau4: (-,-,+)",
        ]

    def _init_cubic(self, desc: SimplestCubic) -> None:
        a = desc.a
        if a < -1:
            raise DegenerateInput(f"simplest cubic parameter a = {a} < -1")
        if not desc.assume_monogenic and not is_squarefree(a * a + 3 * a + 9):
            raise MonogenicityUnknown(
                f"a^2+3a+9 = {a * a + 3 * a + 9} is not squarefree; pass assume_monogenic to accept Z[rho]"
            )
        self.radicands = None
        self._products = [
            [((0, 1),), ((1, 1),), ((2, 1),)],
            [((1, 1),), ((2, 1),), ((0, 1), (1, a + 3), (2, a))],
            [((2, 1),), ((0, 1), (1, a + 3), (2, a)), ((0, a), (1, a * a + 3 * a + 1), (2, a * a + a + 3))],
        ]
        self._signs = None
        self.embedding_convention = ["tau1: largest root", "tau2: middle root", "tau3: smallest root"]

    def _compute_trace_vector(self) -> Tuple[int, ...]:
        # Tr(e_k) = trace of multiplication by e_k
        n = len(self._products)
        return tuple(
            sum(coef for j in range(n) for k, coef in self._products[i][j] if k == j)
            for i in range(n)
        )

    def _compute_integral_basis(self) -> Tuple["FieldElement", ...]:
        n = self.degree
        if self.kind == "cubic":
            return tuple(self.element([1 if j == k else 0 for j in range(n)]) for k in range(n))
        denom = 2 if self.kind == "quadratic" else 4
        generators = [[denom if i == j else 0 for j in range(n)] for i in range(n)]
        for residues in itertools.product(range(denom), repeat=n):
            if not any(residues):
                continue
            candidate = self.element([Fraction(c, denom) for c in residues])
            if all(e.denominator == 1 for e in char_poly_coefficients(candidate)):
                generators.append(list(residues))
        rows = intlattice.hermite_basis(generators)
        return tuple(self.element([Fraction(c, denom) for c in row]) for row in rows)

    def _verify_discriminant(self, rows: List[List[Fraction]]) -> None:
        if self.kind == "cubic":
            x = symbols("x")
            a = self.descriptor.a
            expected = int(discriminant(Poly(x**3 - a * x**2 - (a + 3) * x - 1, x)))
        else:
            # E = S * diag(sqrt R) * C^T, so det(E)^2 = det(S)^2 * prod(R) * det(C)^2
            det_s = int(Matrix(self._signs).det())
            det_c = _fraction(Matrix([[_sym(c) for c in r] for r in rows]).det())
            expected = det_s * det_s * math.prod(self.radicands) * det_c * det_c
        if expected != self.discriminant:
            raise DegenerateInput(
                f"discriminant check failed for {self.descriptor.label}: trace form {self.discriminant}, embedding {expected}"
            )

    # -- element construction -------------------------------------------------
    def element(self, coords: Sequence) -> "FieldElement":
        return FieldElement(self, coords)

    def one(self) -> "FieldElement":
        return FieldElement._raw(self, (Fraction(1),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return FieldElement._raw(self, (Fraction(0),) * self.degree)

    def basis_element(self, k: int) -> "FieldElement":
        """The k-th Q-basis element (1, sqrt D_k or rho^k)."""
        return FieldElement._raw(self, tuple(Fraction(int(j == k)) for j in range(self.degree)))

    def from_integral(self, ints: Sequence[int]) -> "FieldElement":
        coords = [Fraction(0)] * self.degree
        for x, b in zip(ints, self.integral_basis):
            if x:
                for k, c in enumerate(b.coords):
                    coords[k] += x * c
        return FieldElement._raw(self, tuple(coords))

    def integral_coordinates(self, alpha: "FieldElement") -> Tuple[Fraction, ...]:
        n = self.degree
        return tuple(
            sum((alpha.coords[j] * self._basis_inverse[j][k] for j in range(n)), Fraction(0))
            for k in range(n)
        )

    @property
    def rho(self) -> "FieldElement":
        if self.kind != "cubic":
            raise WrongFieldKind("rho exists only in simplest cubic fields")
        return self.basis_element(1)

    # -- embeddings -----------------------------------------------------------
    @lru_cache(maxsize=None)
    def _cubic_roots(self, bits: int) -> Tuple[Tuple[Fraction, Fraction], ...]:
        x = symbols("x")
        a = self.descriptor.a
        poly = Poly(x**3 - a * x**2 - (a + 3) * x - 1, x)
        isolated = poly.intervals(eps=Rational(1, 2**bits))
        roots = [(_fraction(lo), _fraction(hi)) for (lo, hi), _ in isolated]
        return tuple(sorted(roots, reverse=True))

    @lru_cache(maxsize=None)
    def _basis_enclosures(self, i: int, bits: int) -> Tuple[Tuple[int, int], ...]:
        """Integer bounds (lo, hi) with lo <= tau_i(e_k) * 2^bits <= hi for every Q-basis e_k."""
        scale = 1 << bits
        if self.kind != "cubic":
            out = []
            for k, R in enumerate(self.radicands):
                root = math.isqrt(R << (2 * bits))
                hi = root if root * root == (R << (2 * bits)) else root + 1
                if self._signs[i][k] > 0:
                    out.append((root, hi))
                else:
                    out.append((-hi, -root))
            return tuple(out)
        lo, hi = self._cubic_roots(bits + 2)[i]
        r_lo = math.floor(lo * scale)
        r_hi = math.ceil(hi * scale)
        if lo >= 0:
            sq = (lo * lo, hi * hi)
        elif hi <= 0:
            sq = (hi * hi, lo * lo)
        else:
            sq = (Fraction(0), max(lo * lo, hi * hi))
        return ((scale, scale), (r_lo, r_hi), (math.floor(sq[0] * scale), math.ceil(sq[1] * scale)))

    def _scaled_bounds(self, nums: Sequence[int], i: int, bits: int) -> Tuple[int, int]:
        lo = hi = 0
        for c, (el, eh) in zip(nums, self._basis_enclosures(i, bits)):
            if c > 0:
                lo += c * el
                hi += c * eh
            elif c < 0:
                lo += c * eh
                hi += c * el
        return lo, hi

    @lru_cache(maxsize=None)
    def _integral_enclosures(self, bits: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """Per embedding i and integral basis b_k: integer bounds of tau_i(b_k) * 2^bits."""
        out = []
        for i in range(self.degree):
            row = []
            for b in self.integral_basis:
                nums, d = b.scaled()
                lo, hi = self._scaled_bounds(nums, i, bits)
                row.append((lo // d, -((-hi) // d)))
            out.append(tuple(row))
        return tuple(out)

    @lru_cache(maxsize=None)
    def codifferent_basis(self) -> Tuple["FieldElement", ...]:
        """Dual basis b_j^v with Tr(b_i^v b_j) = [i == j]; a Z-basis of the codifferent."""
        inverse = self._trace_form.inv()
        n = self.degree
        dual = []
        for j in range(n):
            e = self.zero()
            for k in range(n):
                c = _fraction(inverse[j, k])
                if c:
                    e = e + self.integral_basis[k] * c
            dual.append(e)
        return tuple(dual)


def _sym(q) -> Rational:
    q = Fraction(q)
    return Rational(q.numerator, q.denominator)


@lru_cache(maxsize=None)
def make_field(desc: FieldDescriptor) -> Field:
    """Validated, cached field for a descriptor."""
    return Field(desc)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------
class FieldElement:
    """Exact element of a Field, stored as Fractions in the Q-basis."""

    __slots__ = ("field", "coords", "_scaled", "_hash")

    def __init__(self, field: Field, coords: Sequence):
        if len(coords) != field.degree:
            raise DegenerateInput(f"expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords = tuple(_fraction(c) for c in coords)
        self._scaled = None
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, coords: Tuple[Fraction, ...]) -> "FieldElement":
        obj = object.__new__(cls)
        obj.field = field
        obj.coords = coords
        obj._scaled = None
        obj._hash = None
        return obj

    def __reduce__(self):
        return (FieldElement, (self.field, self.coords))

    def scaled(self) -> Tuple[Tuple[int, ...], int]:
        """(integer numerators, common positive denominator)."""
        if self._scaled is None:
            d = _lcm_denominator(self.coords)
            self._scaled = (tuple(int(c * d) for c in self.coords), d)
        return self._scaled

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field.descriptor != self.field.descriptor:
                raise WrongFieldKind(f"mixing {self.field.descriptor.label} and {other.field.descriptor.label}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement._raw(self.field, (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement._raw(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by the rational 0")
            return FieldElement._raw(self.field, tuple(a / other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, inverse(other))

    def __pow__(self, k: int):
        return power(self, k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coords == other.coords and (
            self.field is other.field or self.field.descriptor == other.field.descriptor
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.descriptor, self.coords))
        return self._hash

    def __repr__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    __str__ = __repr__


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------
def multiply(alpha: FieldElement, beta: FieldElement) -> FieldElement:
    """Product through the Q-basis multiplication table."""
    field = alpha.field
    products = field._products
    out = [Fraction(0)] * field.degree
    for i, a in enumerate(alpha.coords):
        if not a:
            continue
        row = products[i]
        for j, b in enumerate(beta.coords):
            if not b:
                continue
            ab = a * b
            for k, coef in row[j]:
                out[k] += ab * coef
    return FieldElement._raw(field, tuple(out))


def conjugates(alpha: FieldElement) -> List[FieldElement]:
    """The Galois conjugates of alpha (quadratic and biquadratic fields), alpha first."""
    field = alpha.field
    if field.kind == "cubic":
        raise WrongFieldKind("conjugates are exposed only for quadratic and biquadratic fields")
    return [
        FieldElement._raw(field, tuple(c * s for c, s in zip(alpha.coords, signs)))
        for signs in field._signs
    ]


# sign flips of (1, sqrt D1, sqrt D2, sqrt D3); sigma_i fixes sqrt D_i
_GALOIS_SIGNS = {1: (1, 1, -1, -1), 2: (1, -1, 1, -1), 3: (1, -1, -1, 1)}


def galois_conjugate(alpha: FieldElement, i: int) -> FieldElement:
    """sigma_i(alpha), the non-trivial automorphism over Q(sqrt D_i)."""
    if alpha.field.kind != "biquadratic":
        raise WrongFieldKind("galois_conjugate is defined for biquadratic fields")
    signs = _GALOIS_SIGNS[i]
    return FieldElement._raw(alpha.field, tuple(c * s for c, s in zip(alpha.coords, signs)))


def norm(alpha: FieldElement) -> Fraction:
    field = alpha.field
    if field.kind == "cubic":
        return norm_by_determinant(alpha)
    product = field.one()
    for conj in conjugates(alpha):
        product = multiply(product, conj)
    return product.coords[0]


def multiplication_matrix(alpha: FieldElement) -> Matrix:
    """Matrix of x -> alpha*x in the Q-basis (column k = coordinates of alpha*e_k)."""
    field = alpha.field
    columns = [multiply(alpha, field.basis_element(k)).coords for k in range(field.degree)]
    return Matrix(field.degree, field.degree, lambda i, k: _sym(columns[k][i]))


def norm_by_determinant(alpha: FieldElement) -> Fraction:
    return _fraction(multiplication_matrix(alpha).det())


def inverse(alpha: FieldElement) -> FieldElement:
    field = alpha.field
    if alpha.is_zero():
        raise DivisionByZero("inverse of zero")
    if field.kind == "cubic":
        rhs = Matrix([1] + [0] * (field.degree - 1))
        solution = multiplication_matrix(alpha).LUsolve(rhs)
        return FieldElement._raw(field, tuple(_fraction(solution[k]) for k in range(field.degree)))
    others = field.one()
    for conj in conjugates(alpha)[1:]:
        others = multiply(others, conj)
    n = multiply(alpha, others).coords[0]
    return others / n


def power(alpha: FieldElement, k: int) -> FieldElement:
    if k < 0:
        return power(inverse(alpha), -k)
    result = alpha.field.one()
    base = alpha
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def trace(alpha: FieldElement) -> Fraction:
    return sum((c * t for c, t in zip(alpha.coords, alpha.field._trace_vector)), Fraction(0))


def char_poly_coefficients(alpha: FieldElement) -> List[Fraction]:
    """Elementary symmetric functions e_1..e_n of the embeddings, via Newton power sums."""
    n = alpha.field.degree
    sums = []
    p = alpha.field.one()
    for _ in range(n):
        p = multiply(p, alpha)
        sums.append(trace(p))
    e = [Fraction(1)]
    for k in range(1, n + 1):
        total = Fraction(0)
        for i in range(1, k + 1):
            total += (-1) ** (i - 1) * e[k - i] * sums[i - 1]
        e.append(total / k)
    return e[1:]


# ---------------------------------------------------------------------------
# Signs and embeddings
# ---------------------------------------------------------------------------
def sign_at_embedding(alpha: FieldElement, i: int) -> int:
    """Exact sign (+1, -1, 0) of tau_i(alpha), embeddings indexed from 0."""
    if alpha.is_zero():
        return 0
    nums, _ = alpha.scaled()
    field = alpha.field
    bits = sailconfig.PRECISION_BITS
    while bits <= sailconfig.MAX_PRECISION_BITS:
        lo, hi = field._scaled_bounds(nums, i, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        logger.debug(f"refining sign of {alpha} at tau{i + 1} beyond {bits} bits")
        bits *= 2
    raise PrecisionExhausted(f"sign of {alpha} at tau{i + 1} undecided at {sailconfig.MAX_PRECISION_BITS} bits")


def signature(alpha: FieldElement) -> SignatureVector:
    signs = [sign_at_embedding(alpha, i) for i in range(alpha.field.degree)]
    if 0 in signs:
        raise DivisionByZero("signature of zero")
    return SignatureVector(tuple(1 if s < 0 else 0 for s in signs))


def embedding_interval(alpha: FieldElement, i: int, bits: int) -> Tuple[Fraction, Fraction]:
    """Rational enclosure lo <= tau_i(alpha) <= hi from bits-bit basis enclosures."""
    nums, d = alpha.scaled()
    lo, hi = alpha.field._scaled_bounds(nums, i, bits)
    scale = d << bits
    return Fraction(lo, scale), Fraction(hi, scale)


def numeric_embeddings(alpha: FieldElement, prec: Optional[int] = None) -> List[mpmath.mpf]:
    """mpmath approximations of all embeddings (for candidate search only)."""
    prec = prec or sailconfig.PRECISION_BITS
    out = []
    with mpmath.workprec(prec + 16):
        for i in range(alpha.field.degree):
            lo, hi = embedding_interval(alpha, i, prec + 16)
            mid = (lo + hi) / 2
            out.append(mpmath.mpf(mid.numerator) / mid.denominator)
    return out


def is_totally_positive(alpha: FieldElement) -> bool:
    return all(sign_at_embedding(alpha, i) > 0 for i in range(alpha.field.degree))


def is_integral(alpha: FieldElement) -> bool:
    return all(c.denominator == 1 for c in alpha.field.integral_coordinates(alpha))


def is_in_codifferent(delta: FieldElement) -> bool:
    return all(trace(delta * b).denominator == 1 for b in delta.field.integral_basis)


def is_unit(alpha: FieldElement) -> bool:
    return not alpha.is_zero() and is_integral(alpha) and abs(norm(alpha)) == 1


def are_associates(alpha: FieldElement, beta: FieldElement) -> bool:
    """True when alpha / beta is a totally positive unit."""
    if alpha.is_zero() or beta.is_zero():
        return False
    if abs(norm(alpha)) != abs(norm(beta)):
        return False
    q = alpha / beta
    return is_integral(q) and is_totally_positive(q)


def embed_quadratic_subfield_element(field: Field, i: int, a, b) -> FieldElement:
    """a + b sqrt D_i lifted from the i-th quadratic subfield (i in 1..3)."""
    if field.kind != "biquadratic":
        raise WrongFieldKind("quadratic subfields are indexed in biquadratic fields")
    coords = [Fraction(0)] * 4
    coords[0] = _fraction(a)
    coords[i] = _fraction(b)
    return FieldElement._raw(field, tuple(coords))


def square_root(eta: FieldElement) -> Optional[FieldElement]:
    """The square root of eta in K with positive first embedding, or None."""
    field = eta.field
    if eta.is_zero():
        return field.zero()
    if not is_totally_positive(eta):
        return None
    ic = field.integral_coordinates(eta)
    d = _lcm_denominator(ic)
    target = eta * (d * d)
    size = max(abs(c.numerator) for c in target.coords).bit_length()
    prec = max(sailconfig.PRECISION_BITS, size + 64)
    roots = [mpmath.sqrt(v) for v in numeric_embeddings(target, prec)]
    dual = [numeric_embeddings(b, prec) for b in field.codifferent_basis()]
    n = field.degree
    with mpmath.workprec(prec):
        for tail in itertools.product((1, -1), repeat=n - 1):
            signs = (1,) + tail
            ints = [int(mpmath.nint(mpmath.fsum(dual[k][i] * signs[i] * roots[i] for i in range(n)))) for k in range(n)]
            candidate = field.from_integral(ints)
            if multiply(candidate, candidate) == target:
                return candidate / d
    return None


# ---------------------------------------------------------------------------
# Box enumeration
# ---------------------------------------------------------------------------
def _coordinate_ranges(field: Field, lower: Sequence[Fraction], upper: Sequence[Fraction]) -> List[Tuple[int, int]]:
    # x_k = Tr(b_k^v alpha) = sum_i tau_i(b_k^v) tau_i(alpha)
    ranges = []
    for dual in field.codifferent_basis():
        lo_total = Fraction(0)
        hi_total = Fraction(0)
        for i in range(field.degree):
            dl, dh = embedding_interval(dual, i, _BOX_BITS)
            products = (dl * lower[i], dl * upper[i], dh * lower[i], dh * upper[i])
            lo_total += min(products)
            hi_total += max(products)
        ranges.append((math.ceil(lo_total), math.floor(hi_total)))
    return ranges


def _inside(field: Field, alpha: FieldElement, lower: Sequence[Fraction], upper: Sequence[Fraction]) -> bool:
    for i in range(field.degree):
        if sign_at_embedding(alpha - lower[i], i) <= 0:
            return False
        if sign_at_embedding(upper[i] - alpha, i) <= 0:
            return False
    return True


def iter_integral_points_in_box(
    field: Field, lower: Sequence, upper: Sequence, cap: Optional[int] = None
) -> Iterator[Tuple[int, ...]]:
    """Integral-basis coordinates of every alpha in O_K with lower_i < tau_i(alpha) < upper_i."""
    lower = [_fraction(x) for x in lower]
    upper = [_fraction(x) for x in upper]
    n = field.degree
    if any(l >= u for l, u in zip(lower, upper)):
        return
    cap = sailconfig.BOX_CAP if cap is None else cap
    ranges = _coordinate_ranges(field, lower, upper)
    if any(lo > hi for lo, hi in ranges):
        return
    predicted = math.prod(hi - lo + 1 for lo, hi in ranges)
    if predicted > cap:
        raise BoxTooLarge(predicted, cap)
    enclosures = field._integral_enclosures(_BOX_BITS)
    scale = 1 << _BOX_BITS
    low_scaled = [l * scale for l in lower]
    high_scaled = [u * scale for u in upper]
    x0_lo, x0_hi = ranges[0]
    for tail in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges[1:])):
        # bounds of tau_i(sum_{k>=1} x_k b_k) * 2^bits
        first, last = x0_lo, x0_hi
        partial = []
        for i in range(n):
            slo = shi = 0
            for x, (el, eh) in zip(tail, enclosures[i][1:]):
                if x > 0:
                    slo += x * el
                    shi += x * eh
                elif x < 0:
                    slo += x * eh
                    shi += x * el
            partial.append((slo, shi))
            first = max(first, math.floor((low_scaled[i] - shi) / scale) + 1)
            last = min(last, math.ceil((high_scaled[i] - slo) / scale) - 1)
        for x0 in range(first, last + 1):
            verdict = True
            undecided = False
            for i in range(n):
                lo_i = x0 * scale + partial[i][0]
                hi_i = x0 * scale + partial[i][1]
                if hi_i <= low_scaled[i] or lo_i >= high_scaled[i]:
                    verdict = False
                    break
                if not (lo_i > low_scaled[i] and hi_i < high_scaled[i]):
                    undecided = True
            if not verdict:
                continue
            point = (x0,) + tuple(tail)
            if undecided and not _inside(field, field.from_integral(point), lower, upper):
                continue
            yield point


def enumerate_integers_in_box(field: Field, lower: Sequence, upper: Sequence, cap: Optional[int] = None) -> List[FieldElement]:
    """All alpha in O_K with lower_i < tau_i(alpha) < upper_i, exactly."""
    return [field.from_integral(p) for p in iter_integral_points_in_box(field, lower, upper, cap)]


def upper_enclosure(alpha: FieldElement, bits: int = _BOX_BITS) -> List[Fraction]:
    """Rational upper bounds of every embedding of alpha."""
    return [embedding_interval(alpha, i, bits)[1] for i in range(alpha.field.degree)]


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------
def element_to_json(alpha: FieldElement) -> dict:
    return {"field": alpha.field.descriptor.to_json(), "coeffs": [str(c) for c in alpha.coords]}


def element_from_json(data: dict, field: Optional[Field] = None) -> FieldElement:
    if field is None:
        field = make_field(descriptor_from_json(data["field"]))
    return field.element([Fraction(c) for c in data["coeffs"]])
