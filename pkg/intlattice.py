#!/usr/bin/env python3
"""
INTLATTICE - EXACT INTEGER LATTICE HELPERS
==========================================

Sublattices of Z^n given by integer generators, their saturations and chart
coordinates, all read off sympy's Hermite and Smith normal forms.

CONVENTIONS:
------------
- Vectors are tuples of Python ints; matrices are lists of row vectors.
- sublattice(rows) keeps a Hermite basis of the generated lattice L, a basis
  of its saturation Z^n cap span(L) and the index [saturation : L], which is
  the product of the Smith invariant factors of the basis.
- With B a basis and P a set of pivot columns, M = B_P^-1 B spans the same
  space; the saturation is the dual of the column lattice of M, mapped back
  through M.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Sequence, Tuple

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from sail_errors import DegenerateInput

Vector = Tuple[int, ...]


def _as_int(v) -> int:
    if not v.is_integer:
        raise DegenerateInput(f"non-integral lattice coordinate {v}")
    return int(v)


def _int_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = [[int(v) for v in r] for r in rows]
    if not m or not m[0]:
        raise DegenerateInput("empty matrix")
    return Matrix(m)


def _hnf_columns(M: Matrix) -> List[Vector]:
    """Hermite basis of the column lattice of M, one tuple per column."""
    if not any(M):
        return []
    H = hermite_normal_form(M)
    return [tuple(_as_int(H[i, j]) for i in range(H.rows)) for j in range(H.cols)]


@dataclass(frozen=True)
class Sublattice:
    basis: Tuple[Vector, ...]
    saturation: Tuple[Vector, ...]
    independent_rows: Tuple[int, ...]
    index: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def saturation_basis(self) -> List[Vector]:
        return list(self.saturation)

    @cached_property
    def _chart_inverse(self) -> Tuple[Tuple[int, ...], List[List[Fraction]]]:
        S = Matrix([list(r) for r in self.saturation])
        _, pivots = S.rref()
        inverse = S[:, list(pivots)].inv()
        return tuple(pivots), [[Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(self.rank)]
                               for i in range(self.rank)]

    def coordinates(self, x: Sequence[int]) -> Vector:
        """Coordinates of x in the saturation basis (x must lie in the span)."""
        if not self.rank:
            return ()
        pivots, inverse = self._chart_inverse
        picked = [x[j] for j in pivots]
        out = []
        for k in range(self.rank):
            c = sum(picked[i] * inverse[i][k] for i in range(self.rank))
            if c.denominator != 1:
                raise DegenerateInput(f"{tuple(x)} is not in the saturated lattice")
            out.append(int(c))
        return tuple(out)

    def in_span(self, x: Sequence[int]) -> bool:
        if not self.rank:
            return not any(x)
        pivots, inverse = self._chart_inverse
        picked = [x[j] for j in pivots]
        c = [sum(picked[i] * inverse[i][k] for i in range(self.rank)) for k in range(self.rank)]
        back = [sum(ck * row[j] for ck, row in zip(c, self.saturation)) for j in range(len(x))]
        return back == [Fraction(v) for v in x]


def _saturation(basis: Sequence[Vector]) -> List[Vector]:
    B = Matrix([list(b) for b in basis])
    r = B.rows
    _, pivots = B.rref()
    M = B[:, list(pivots)].inv() * B
    q = math.lcm(*(int(v.q) for v in M))
    W = Matrix(_hnf_columns((q * M).applyfunc(_as_int))).T
    dual = q * W.inv()
    S = dual * M
    return [tuple(_as_int(S[i, j]) for j in range(S.cols)) for i in range(r)]


def _index(basis: Sequence[Vector]) -> int:
    snf = smith_normal_form(Matrix([list(b) for b in basis]), domain=ZZ)
    result = 1
    for k in range(min(snf.shape)):
        result *= abs(_as_int(snf[k, k]))
    return result


def sublattice(rows: Sequence[Sequence[int]]) -> Sublattice:
    M = _int_matrix(rows)
    basis = _hnf_columns(M.T)
    if not basis:
        return Sublattice((), (), (), 1)
    _, independent = M.T.rref()
    return Sublattice(
        basis=tuple(basis),
        saturation=tuple(_saturation(basis)),
        independent_rows=tuple(independent),
        index=_index(basis),
    )


def rank(rows: Sequence[Sequence[int]]) -> int:
    return _int_matrix(rows).rank()


def lattice_basis(rows: Sequence[Sequence[int]]) -> List[Vector]:
    """A basis of the lattice generated by arbitrary integer rows."""
    return _hnf_columns(_int_matrix(rows).T)


def saturation(rows: Sequence[Sequence[int]]) -> Tuple[List[Vector], int]:
    """(basis of the saturated lattice, index of the generated lattice in it)."""
    lat = sublattice(rows)
    return lat.saturation_basis(), lat.index


def hermite_basis(rows: Sequence[Sequence[int]]) -> List[Vector]:
    """Reduced lower-triangular basis of a full-rank lattice in Z^n.

    Row k is supported on coordinates 0..k with a positive pivot at k, and
    every entry left of a pivot lies in [0, pivot of that column).
    """
    n = len(rows[0])
    basis = lattice_basis(rows)
    if len(basis) != n:
        raise DegenerateInput("generators do not span a full-rank lattice")
    return basis


def determinant(rows: Sequence[Sequence[int]]) -> int:
    return int(Matrix([list(r) for r in rows]).det())
