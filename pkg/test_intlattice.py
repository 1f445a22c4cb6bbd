#!/usr/bin/env python3
"""
Tests for intlattice: sublattice index and saturation, chart coordinates and
Hermite bases
"""
import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import intlattice
from sail_errors import DegenerateInput


class TestSublattice(unittest.TestCase):
    def test_index_of_full_rank_rows(self):
        lat = intlattice.sublattice([(2, 0), (0, 3)])
        self.assertEqual(lat.rank, 2)
        self.assertEqual(lat.index, 6)
        self.assertEqual(abs(intlattice.determinant(lat.saturation_basis())), 1)

    def test_saturated_row(self):
        lat = intlattice.sublattice([(1, 1, 1)])
        self.assertEqual(lat.index, 1)
        self.assertTrue(lat.in_span((2, 2, 2)))
        self.assertFalse(lat.in_span((1, 0, 0)))
        self.assertEqual(lat.coordinates((3, 3, 3)), (3,))

    def test_non_primitive_row(self):
        lat = intlattice.sublattice([(2, 4, 6)])
        self.assertEqual(lat.index, 2)
        self.assertEqual([tuple(abs(v) for v in b) for b in lat.saturation_basis()], [(1, 2, 3)])

    def test_rank_deficient_rows(self):
        lat = intlattice.sublattice([(1, 2), (2, 4)])
        self.assertEqual(lat.rank, 1)
        self.assertEqual(lat.index, 1)
        self.assertEqual(lat.independent_rows, (0,))

    def test_saturation_of_a_plane(self):
        # both rows lie on the plane z = 2x + 2y and span an index 3 sublattice of it
        lat = intlattice.sublattice([(1, 1, 4), (1, -2, -2)])
        self.assertEqual(lat.rank, 2)
        self.assertEqual(lat.index, 3)
        for v in lat.saturation_basis():
            self.assertEqual(2 * v[0] + 2 * v[1] - v[2], 0)
        for x in [(1, 0, 2), (0, 1, 2), (3, -4, -2)]:
            self.assertTrue(lat.in_span(x))
            c = lat.coordinates(x)
            rebuilt = tuple(sum(ck * b[j] for ck, b in zip(c, lat.saturation_basis())) for j in range(3))
            self.assertEqual(rebuilt, x)
        self.assertFalse(lat.in_span((1, 0, 0)))

    def test_zero_rows(self):
        lat = intlattice.sublattice([(0, 0, 0)])
        self.assertEqual(lat.rank, 0)
        self.assertEqual(lat.coordinates((0, 0, 0)), ())


class TestLattices(unittest.TestCase):
    def test_saturation(self):
        basis, index = intlattice.saturation([(2, 0), (0, 2), (2, 2)])
        self.assertEqual(index, 4)
        self.assertEqual(abs(intlattice.determinant(basis)), 1)

    def test_lattice_basis_of_redundant_rows(self):
        basis = intlattice.lattice_basis([(2, 0, 0), (0, 3, 0), (2, 3, 0), (4, 0, 0)])
        self.assertEqual(len(basis), 2)
        self.assertEqual(abs(intlattice.determinant([b[:2] for b in basis])), 6)

    def test_hermite_basis(self):
        basis = intlattice.hermite_basis([(2, 0), (0, 2), (1, 1)])
        self.assertEqual(basis, [(2, 0), (1, 1)])

    def test_hermite_basis_is_reduced(self):
        basis = intlattice.hermite_basis([(4, 0, 0), (0, 4, 0), (0, 0, 4), (1, 1, 1), (2, 0, 2)])
        for k, row in enumerate(basis):
            self.assertGreater(row[k], 0)
            self.assertTrue(all(v == 0 for v in row[k + 1:]))
            for j in range(k):
                self.assertTrue(0 <= row[j] < basis[j][j])
        self.assertEqual(intlattice.determinant(basis), 8)

    def test_hermite_basis_needs_full_rank(self):
        with self.assertRaises(DegenerateInput):
            intlattice.hermite_basis([(1, 1), (2, 2)])

    def test_rank_and_determinant(self):
        self.assertEqual(intlattice.rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]), 2)
        self.assertEqual(intlattice.determinant([(1, 2), (3, 4)]), -2)


if __name__ == "__main__":
    unittest.main()
