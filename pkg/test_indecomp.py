#!/usr/bin/env python3
"""
Tests for indecomp: indecomposability, unit reduction, the three iota strategies
and the rank-bound arithmetic
"""
import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import indecomp
import latgeo
import sailconfig
from families import shanks_faces
from field_core import Biquadratic, Quadratic, SimplestCubic, are_associates, is_totally_positive, make_field, power
from sail_errors import IncompleteSailData, WrongDegree, WrongFieldKind


class TestIndecomposable(unittest.TestCase):
    def setUp(self):
        self.F = make_field(Quadratic(2))

    def test_sqrt2(self):
        self.assertTrue(indecomp.is_indecomposable(self.F.one()))
        self.assertTrue(indecomp.is_indecomposable(self.F.element([2, 1])))
        self.assertFalse(indecomp.is_indecomposable(self.F.element([2, 0])))
        self.assertFalse(indecomp.is_indecomposable(self.F.element([3, 1])))

    def test_not_totally_positive(self):
        self.assertFalse(indecomp.is_indecomposable(self.F.element([1, 1])))
        self.assertFalse(indecomp.is_indecomposable(self.F.zero()))

    def test_unit_multiples_stay_indecomposable(self):
        eps = self.F.element([3, 2])
        alpha = self.F.element([2, 1])
        self.assertTrue(indecomp.is_indecomposable(alpha * eps))
        self.assertTrue(indecomp.is_indecomposable(alpha * power(eps, -2)))

    def test_answers_are_cached_with_a_bound(self):
        info = indecomp.is_indecomposable.cache_info()
        self.assertEqual(info.maxsize, sailconfig.INDECOMPOSABLE_CACHE_SIZE)
        indecomp.is_indecomposable.cache_clear()
        alpha = self.F.element([2, 1])
        indecomp.is_indecomposable(alpha)
        indecomp.is_indecomposable(alpha)
        info = indecomp.is_indecomposable.cache_info()
        self.assertEqual((info.hits, info.misses, info.currsize), (1, 1, 1))


class TestDomainBoxes(unittest.TestCase):
    def test_boxes_are_exact_rationals(self):
        F = make_field(Biquadratic(5, 3))
        gens = indecomp.totally_positive_unit_generators(F)
        for lower, upper in indecomp._domain_boxes(F, gens, 10):
            self.assertEqual(len(lower), 4)
            for lo, hi in zip(lower, upper):
                self.assertIsInstance(lo, Fraction)
                self.assertTrue(0 < lo < hi)

    def test_boundary_elements_are_covered(self):
        # 1 sits on the lower corner of the domain and 2 has norm exactly 4 in Q(sqrt 2)
        F = make_field(Quadratic(2))
        gens = indecomp.totally_positive_unit_generators(F)
        boxes = indecomp._domain_boxes(F, gens, 4)
        for value in (1, 2):
            self.assertTrue(any(all(lo <= value <= hi for lo, hi in zip(lower, upper)) for lower, upper in boxes), value)

    def test_bruteforce_keeps_norm_bound_elements(self):
        F = make_field(Quadratic(2))
        reps = indecomp.bruteforce_indecomposables(F, bound=2).representatives
        self.assertTrue(any(are_associates(r, F.element([2, 1])) for r in reps))
        self.assertTrue(any(are_associates(r, F.one()) for r in reps))


class TestUnitReduction(unittest.TestCase):
    def test_reduction_returns_an_associate(self):
        F = make_field(Quadratic(7))
        eps = indecomp.totally_positive_unit_generators(F)[0]
        alpha = F.element([3, 1]) * power(eps, 5)
        reduced = indecomp.reduce_modulo_units(alpha)
        self.assertTrue(are_associates(alpha, reduced))
        self.assertEqual(indecomp.reduce_modulo_units(reduced), reduced)

    def test_cubic_generators(self):
        F = make_field(SimplestCubic(1))
        gens = indecomp.totally_positive_unit_generators(F)
        self.assertEqual(gens, [F.rho * F.rho, (F.rho + 1) * (F.rho + 1)])
        self.assertTrue(all(is_totally_positive(g) for g in gens))


class TestIotaStrategies(unittest.TestCase):
    def test_continued_fraction_strategy(self):
        count, result = indecomp.iota(make_field(Quadratic(2)), "cf")
        self.assertEqual(count, 2)
        self.assertEqual(result.status, "proved")

    def test_continued_fraction_needs_quadratic(self):
        with self.assertRaises(WrongFieldKind):
            indecomp.iota(make_field(SimplestCubic(1)), "continued_fraction")

    def test_bruteforce_matches_continued_fraction(self):
        for D in (2, 3, 5, 6):
            F = make_field(Quadratic(D))
            self.assertEqual(indecomp.iota(F, "bruteforce")[0], indecomp.iota(F, "cf")[0], f"D={D}")

    def test_bruteforce_with_fixed_bound(self):
        result = indecomp.bruteforce_indecomposables(make_field(Quadratic(3)), bound=20)
        self.assertEqual(result.status, "desk-verified up to B=20")
        self.assertEqual(result.count, 1)

    def test_sail_strategy_for_shanks(self):
        F = make_field(SimplestCubic(1))
        A1, A2 = shanks_faces(F)
        gens = indecomp.totally_positive_unit_generators(F)
        match = latgeo.match_facets([A1, A2], gens)
        sail = indecomp.SailData(F, [A1, A2], {}, match, gens)
        count, result = indecomp.iota(F, "sail", sail=sail)
        self.assertEqual(count, 5)
        self.assertEqual(result.interior_count, 1)
        self.assertEqual(result.status, "sail faces supplied, interior counts exact")

    def test_sail_strategy_needs_matching(self):
        F = make_field(SimplestCubic(1))
        A1, A2 = shanks_faces(F)
        sail = indecomp.SailData(F, [A1, A2], {}, None, indecomp.totally_positive_unit_generators(F))
        with self.assertRaises(IncompleteSailData):
            indecomp.sail_certified_iota(sail)
        with self.assertRaises(IncompleteSailData):
            indecomp.iota(F, "sail")

    def test_exact_interior_count_needs_cubic(self):
        F = make_field(Quadratic(2))
        segment = latgeo.make_polytope([F.one(), F.element([3, 2])])
        with self.assertRaises(WrongDegree):
            indecomp.iota_int_exact_cubic(segment)

    def test_interior_bound_vanishes_on_unimodular_faces(self):
        F = make_field(SimplestCubic(1))
        A2 = shanks_faces(F)[1]
        self.assertEqual(indecomp.iota_int_bound(A2, latgeo.triangulate(A2)), 0)

    def test_json(self):
        data = indecomp.iota(make_field(Quadratic(5)), "cf")[1].to_json()
        self.assertEqual(data["iota"], 1)
        self.assertEqual(data["method"], "continued_fraction")


class TestRankBounds(unittest.TestCase):
    def test_square_classes(self):
        self.assertEqual(indecomp.square_class_count(3, 4, 3), 6)
        self.assertEqual(indecomp.square_class_count(2, 2, 2), 2)

    def test_universal_rank_bound(self):
        self.assertEqual(indecomp.universal_rank_bounds(3, 2, 4, 3), 12)

    def test_biquadratic_generators_are_totally_positive(self):
        gens = indecomp.totally_positive_unit_generators(make_field(Biquadratic(5, 3)))
        self.assertEqual(len(gens), 3)
        self.assertTrue(all(is_totally_positive(g) for g in gens))


if __name__ == "__main__":
    unittest.main()
