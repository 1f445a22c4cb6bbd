#!/usr/bin/env python3
"""
Tests for latgeo: integer volumes and distances, sail certificates, hulls,
triangulations and face matching
"""
import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import latgeo
from field_core import Quadratic, SimplestCubic, make_field, power, trace
from sail_errors import NotASimplex, NotCertifiable


def shanks(a):
    F = make_field(SimplestCubic(a))
    rho = F.rho
    eps1, eps2 = rho * rho, (rho + 1) * (rho + 1)
    A1 = latgeo.make_polytope([F.one(), eps1, eps2], "A1")
    A2 = latgeo.make_polytope([F.one(), eps1, eps1 * power(eps2, -1)], "A2")
    return F, eps1, eps2, A1, A2


class TestQuadraticSegment(unittest.TestCase):
    def setUp(self):
        self.F = make_field(Quadratic(2))
        self.segment = latgeo.make_polytope([self.F.one(), self.F.element([3, 2])], "seg")

    def test_volume_and_distance(self):
        self.assertEqual(self.segment.dim, 1)
        self.assertEqual(latgeo.integer_volume(self.segment), 2)
        self.assertEqual(latgeo.polytope_volume(self.segment), 2)
        self.assertEqual(latgeo.integer_distance(self.segment), 1)

    def test_lattice_points(self):
        points = latgeo.lattice_points(self.segment)
        self.assertEqual(set(points), {self.F.one(), self.F.element([2, 1]), self.F.element([3, 2])})

    def test_certificate(self):
        cert = latgeo.certify_on_sail(self.segment)
        self.assertEqual(cert.k, 1)
        self.assertEqual(cert.delta, self.F.element([Fraction(1, 2), Fraction(-1, 4)]))

    def test_off_sail_segment_is_not_certified(self):
        # the affine hull of 1 and 3 passes through the origin
        segment = latgeo.make_polytope([self.F.one(), self.F.element([3, 0])])
        with self.assertRaises(NotCertifiable):
            latgeo.certify_on_sail(segment)

    def test_facets_of_segment(self):
        ends = latgeo.facets(self.segment)
        self.assertEqual(len(ends), 2)
        self.assertTrue(all(F.dim == 0 for F in ends))


class TestShanksFaces(unittest.TestCase):
    def test_volumes_and_distances(self):
        for a in (-1, 1, 2):
            F, eps1, eps2, A1, A2 = shanks(a)
            q = a * a + 3 * a + 3
            self.assertEqual(latgeo.integer_volume(A1), 1)
            self.assertEqual(latgeo.integer_volume(A2), q)
            self.assertEqual(latgeo.polytope_volume(A2), q)
            self.assertEqual(latgeo.integer_distance(A1), 2)
            self.assertEqual(latgeo.integer_distance(A2), 1)

    def test_pick_count(self):
        for a in (-1, 1, 2):
            A2 = shanks(a)[4]
            boundary, interior = latgeo.lattice_points_on_face(A2)
            self.assertEqual(interior, (a * a + 3 * a + 2) // 2)
            self.assertEqual(len(latgeo.lattice_points(A2)), boundary + interior)

    def test_parallelepiped_counts(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        self.assertEqual(latgeo.parallelepiped_lattice_count(A1), 1)
        self.assertEqual(latgeo.parallelepiped_lattice_count(A2), 6)
        self.assertEqual(latgeo.parallelepiped_points(A1), [F.element([1, 1, 1])])

    def test_certificate_levels(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        self.assertEqual(latgeo.certify_on_sail(A2).k, 1)
        with self.assertRaises(NotCertifiable):
            latgeo.certify_on_sail(A1)
        self.assertGreater(latgeo.certify_on_sail(A1, max_level=None).k, 1)

    def test_triangulation(self):
        A2 = shanks(1)[4]
        T = latgeo.triangulate(A2)
        self.assertEqual(len(T.simplices), 7)
        self.assertTrue(latgeo.is_unimodular(T))
        report = latgeo.validate_triangulation(A2, T)
        self.assertTrue(report.ok, report.problems)
        self.assertEqual(report.volume_sum, 7)

    def test_bad_triangulation_is_reported(self):
        A2 = shanks(1)[4]
        T = latgeo.triangulate(A2)
        broken = latgeo.Triangulation(T.points, T.simplices[1:])
        self.assertFalse(latgeo.validate_triangulation(A2, broken).ok)

    def test_dissection_without_shared_facets(self):
        # a square split along its diagonal, with one half cut again at the midpoint
        F = make_field(SimplestCubic(1))
        pts = [F.element([1, x, y]) for x, y in ((0, 0), (2, 0), (2, 2), (0, 2), (1, 1))]
        square = latgeo.make_polytope(pts[:4], "square")
        self.assertEqual(latgeo.polytope_volume(square), 8)
        T = latgeo.Triangulation(tuple(pts), ((0, 1, 3), (1, 2, 4), (2, 3, 4)))
        report = latgeo.validate_triangulation(square, T)
        self.assertTrue(report.ok, report.problems)
        self.assertEqual(report.volume_sum, 8)

    def test_overlapping_simplices_are_reported(self):
        F = make_field(SimplestCubic(1))
        pts = [F.element([1, x, y]) for x, y in ((0, 0), (2, 0), (2, 2), (0, 2))]
        square = latgeo.make_polytope(pts, "square")
        T = latgeo.Triangulation(tuple(pts), ((0, 1, 3), (0, 2, 3)))
        report = latgeo.validate_triangulation(square, T)
        self.assertEqual(report.volume_sum, 8)
        self.assertFalse(report.ok)
        self.assertTrue(any("overlap" in p for p in report.problems))

    def test_volume_is_unit_invariant(self):
        F, eps1, eps2, A1, A2 = shanks(2)
        moved = latgeo.make_polytope([eps2 * v for v in A2.vertices])
        self.assertEqual(latgeo.integer_volume(moved), latgeo.integer_volume(A2))
        self.assertEqual(latgeo.integer_distance(moved), latgeo.integer_distance(A2))

    def test_volume_needs_simplex(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        inner = [x for x in latgeo.lattice_points(A2) if x not in A2.vertices]
        quad = latgeo.make_polytope(list(A2.vertices) + inner[:1])
        self.assertEqual(quad.dim, 2)
        with self.assertRaises(NotASimplex):
            latgeo.integer_volume(quad)

    def test_off_face_points(self):
        for a in (-1, 1, 2):
            F, eps1, eps2, A1, A2 = shanks(a)
            q = a * a + 3 * a + 3
            off = latgeo.off_face_points(A1)
            self.assertEqual(off, [F.element([1, 1, 1])], f"a={a}")
            delta, k = latgeo.codifferent_functional(A1)
            self.assertTrue(k < trace(delta * off[0]) < 2 * k)
            # the whole-face parallelepiped of A2 has q - 1 points, but none lies off
            # the face once A2 is cut into unimodular triangles
            self.assertEqual(len(latgeo.parallelepiped_points(A2)), q - 1)
            self.assertEqual(latgeo.off_face_points(A2), [], f"a={a}")

    def test_off_face_points_with_supplied_triangulation(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        T = latgeo.triangulate(A2)
        self.assertEqual(latgeo.off_face_points(A2, T), [])

    def test_edge_matching_closes(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        report = latgeo.match_facets([A1, A2], [eps1, eps2])
        self.assertTrue(report.closed, report.to_json())
        self.assertEqual(len(report.matches), 3)

    def test_unit_exponents(self):
        F, eps1, eps2, A1, A2 = shanks(1)
        u = power(eps1, 2) * power(eps2, -1)
        self.assertEqual(latgeo.unit_exponents(u, [eps1, eps2], 2), (2, -1))
        self.assertIsNone(latgeo.unit_exponents(power(eps1, 5), [eps1, eps2], 2))


if __name__ == "__main__":
    unittest.main()
