#!/usr/bin/env python3
"""
Tests for units: marks d_F, the unit classification of biquadratic fields,
square tests and signature ranks
"""
import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import latgeo
import units
from field_core import Biquadratic, Quadratic, is_totally_positive, is_unit, make_field, norm, signature, square_root
from sail_errors import DegenerateBiquadratic, NonSquarefree, WrongFieldKind, WrongNorm

HALF = Fraction(1, 2)


class TestMarks(unittest.TestCase):
    def test_known_marks(self):
        self.assertEqual(units.d_F(make_field(Quadratic(3)).element([2, 1])).d, 6)
        self.assertEqual(units.d_F(make_field(Quadratic(15)).element([4, 1])).d, 10)
        self.assertEqual(units.d_F(make_field(Quadratic(7)).element([8, 3])).d, 2)
        self.assertEqual(units.d_F(make_field(Quadratic(21)).element([Fraction(5, 2), HALF])).d, 7)

    def test_root_squares_to_marked_unit(self):
        eps = make_field(Quadratic(3)).element([2, 1])
        root = units.sqrt_d_epsilon(eps)
        self.assertTrue(is_totally_positive(root))
        self.assertEqual(root * root, eps * 6)

    def test_norm_minus_one_rejected(self):
        with self.assertRaises(WrongNorm):
            units.d_F(make_field(Quadratic(2)).element([1, 1]))

    def test_needs_quadratic(self):
        with self.assertRaises(WrongFieldKind):
            units.d_F(make_field(Biquadratic(5, 3)).one())

    def test_rational_squares(self):
        K = make_field(Biquadratic(5, 3))
        self.assertTrue(units.is_rational_square_in(K, Fraction(60)))
        self.assertTrue(units.is_rational_square_in(K, Fraction(5, 4)))
        self.assertFalse(units.is_rational_square_in(K, Fraction(2)))
        self.assertFalse(units.is_rational_square_in(K, Fraction(-1)))


class TestMixedNorms(unittest.TestCase):
    """Q(sqrt5, sqrt3): N(phi) = -1, N(2 + sqrt3) = N(4 + sqrt15) = 1."""

    def setUp(self):
        self.K = make_field(Biquadratic(5, 3))
        self.system = units.kubota_unit_system(5, 3)

    def test_case(self):
        self.assertEqual(self.system.norms, [-1, 1, 1])
        self.assertEqual(self.system.case_label, "1.iv")
        self.assertIsNone(self.system.trace_square_test)

    def test_generators_are_units(self):
        for g in self.system.generators:
            self.assertTrue(is_unit(g))

    def test_signature_rank(self):
        rank, basis = units.signature_rank(5, 3)
        self.assertEqual(rank, 3)
        self.assertEqual(len(basis), 3)
        self.assertEqual(units.exhaustive_signature_rank(5, 3, box=1), 3)
        self.assertEqual(units.field_signature_rank(self.K), 3)

    def test_signatures_match_direct_computation(self):
        for g, sig in zip(self.system.generators, self.system.signatures()):
            self.assertEqual(signature(g), sig)

    def test_unit_with_radical_signature(self):
        eta = units.find_unit_with_radical_signature(self.K, 1)
        self.assertTrue(is_unit(eta))
        self.assertEqual(signature(eta), units.radical_signature(self.K, 5))

    def test_unit_norms_report(self):
        report = units.verify_unit_norms(self.K)
        self.assertTrue(report["applies"])
        self.assertTrue(report["holds"])
        self.assertEqual(report["norms"], [1, 1, 1])
        self.assertTrue(report["galois_identities"])

    def test_norm_check_alias(self):
        self.assertIs(units.verify_lemma_un1, units.verify_unit_norms)

    def test_index_check(self):
        report = units.unit_index_check(self.K)
        self.assertTrue(report["independent"])
        self.assertTrue(report["two_saturated"])
        self.assertTrue(report["index_one"])
        self.assertGreater(report["regulator"], 0)

    def test_totally_positive_generators(self):
        gens = units.totally_positive_unit_generators(self.K)
        self.assertEqual(len(gens), 3)
        for g in gens:
            self.assertTrue(is_unit(g))
            self.assertTrue(is_totally_positive(g))
        for u in (self.K.element([Fraction(3, 2), HALF, 0, 0]), self.K.element([2, 0, 1, 0]), self.K.element([4, 0, 0, 1])):
            self.assertIsNotNone(latgeo.unit_exponents(u, gens, 4), str(u))

    def test_json(self):
        data = self.system.to_json()
        self.assertEqual(data["case"], "1.iv")
        self.assertEqual(len(data["generators"]), 3)


class TestAllNormsMinusOne(unittest.TestCase):
    """Q(sqrt2, sqrt5): every quadratic fundamental unit has norm -1."""

    def setUp(self):
        self.K = make_field(Biquadratic(2, 5))

    def test_case(self):
        system = units.kubota_unit_system(2, 5)
        self.assertEqual(system.norms, [-1, -1, -1])
        self.assertEqual(system.case_label, "2.ii")
        self.assertEqual(len(system.trace_square_test), 4)

    def test_square_test(self):
        _, lifted, _ = units._quadratic_units(self.K)
        result = units.square_test_traces(*lifted)
        self.assertTrue(result["square"])
        self.assertTrue(all(result["verdicts"]))
        root = square_root(lifted[0] * lifted[1] * lifted[2])
        expected = self.K.element([Fraction(3, 2), HALF, HALF, HALF])
        self.assertIn(root, (expected, -expected))

    def test_full_signature_rank(self):
        self.assertEqual(units.signature_rank(2, 5)[0], 4)
        report = units.verify_unit_norms(self.K)
        self.assertFalse(report["applies"])
        self.assertTrue(report["holds"])

    def test_system_generators_have_unit_norm(self):
        for g in units.kubota_unit_system(2, 5).generators:
            self.assertEqual(abs(norm(g)), 1)


class TestOracleAgreement(unittest.TestCase):
    def test_system_rank_matches_oracle(self):
        if os.getenv("SAILKIT_SLOW_TESTS"):
            pairs = [(a, b) for a in (2, 3, 5, 6, 7) for b in range(a + 1, 31)]
        else:
            pairs = [(a, b) for a in (2, 3, 5) for b in range(a + 1, 14)]
        for D1, D2 in pairs:
            try:
                make_field(Biquadratic(D1, D2))
            except (NonSquarefree, DegenerateBiquadratic):
                continue
            rank = units.signature_rank(D1, D2)[0]
            oracle = units.exhaustive_signature_rank(D1, D2, box=2)
            self.assertGreaterEqual(rank, oracle, f"({D1}, {D2})")
            self.assertEqual(rank, oracle, f"({D1}, {D2})")


if __name__ == "__main__":
    unittest.main()
