#!/usr/bin/env python3
"""
Tests for families: Lucas pairs, the Q(sqrt5, sqrt p_n) verification, Shanks'
simplest cubic fields and the rank-bound calculators
"""
import dataclasses
import os
import sys
import unittest
from fractions import Fraction
from unittest import mock

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import families
from sail_errors import DegenerateInput, NotApplicable, NotSquarefree

SLOW = bool(os.getenv("SAILKIT_SLOW_TESTS"))


class TestLucasPairs(unittest.TestCase):
    def test_small_pairs(self):
        self.assertEqual(families.lucas_pair(1), families.LucasPair(1, 1, 1))
        self.assertEqual((families.lucas_pair(3).x, families.lucas_pair(3).y), (4, 2))
        self.assertEqual((families.lucas_pair(6).x, families.lucas_pair(6).y), (18, 8))

    def test_identities_hold(self):
        self.assertEqual(families.lucas_identity_failures(200), [])

    def test_index_must_be_positive(self):
        with self.assertRaises(DegenerateInput):
            families.lucas_pair(0)


class TestFamilyInstance(unittest.TestCase):
    def test_first_instance(self):
        inst = families.family_instance(0)
        self.assertEqual((inst.p, inst.r), (3, 15))
        self.assertEqual(inst.discriminant, 3600)
        self.assertEqual(inst.rho, inst.field.element([3, 0, Fraction(-1, 2), Fraction(1, 2)]))
        half = Fraction(1, 2)
        self.assertEqual(inst.gammas[1], inst.field.element([Fraction(5, 2), half, -half, -half]))
        self.assertFalse(inst.conditional)

    def test_second_instance_radicand(self):
        inst = families.family_instance(1, assume_squarefree=True)
        self.assertEqual(inst.p, 372099)
        self.assertEqual(inst.r, 5 * inst.p)
        self.assertTrue(inst.conditional)

    def test_squarefree_tester_is_consulted(self):
        with self.assertRaises(NotSquarefree):
            families.family_instance(0, squarefree_tester=lambda n: False)

    def test_labels(self):
        self.assertEqual(families.fundamental_labels(0), ["A", "C-1"])
        labels = families.fundamental_labels(1)
        self.assertEqual(len(labels), 1 + 6 + 6 + 7)
        self.assertIn("B-3", labels)
        self.assertNotIn("C+1", labels)
        self.assertIn("C+1", families.hyperplane_lists(families.family_instance(0)))

    def test_chart_coordinates(self):
        inst = families.family_instance(0)
        members = families.hyperplane_lists(inst)["A"][1]
        basis = [members[k] for k in families.A_BASIS]
        for x, want in zip(members, families.A_CHART):
            self.assertEqual(families.chart_coordinates(members[0], basis, x), want)

    def test_matching_window(self):
        self.assertEqual(families.matching_window(0), 2)
        self.assertEqual(families.matching_window(2), 14)


class TestVerifyFamily(unittest.TestCase):
    def test_first_instance_passes(self):
        report = families.verify_family(0)
        self.assertTrue(report.passed, [c.to_json() for c in report.failed()])
        self.assertEqual(report.values["iota"], 3)
        names = [c.name for c in report.checks]
        self.assertEqual(names, sorted(names))
        self.assertEqual(len(names), 9)
        self.assertEqual(report.check("b_trace_incidences").detail, "22 incidences")

    def test_broken_gamma_is_caught(self):
        inst = families.family_instance(0)
        gammas = dict(inst.gammas)
        gammas[1] = gammas[1] + 1
        broken = dataclasses.replace(inst, gammas=gammas)
        report = families.verify_family(0, instance=broken)
        self.assertFalse(report.passed)
        failed = report.check("b_trace_incidences")
        self.assertFalse(failed.passed)
        self.assertTrue(failed.witnesses)

    def test_hand_inequalities(self):
        self.assertTrue(families.hand_inequalities(0).passed)
        self.assertTrue(families.hand_inequalities(1).passed)

    def test_log_window_brackets_iota(self):
        lo, hi = families.log_discriminant_window(3600)
        self.assertLess(lo, hi)
        self.assertTrue(hi <= 3 <= lo + 1)

    @unittest.skipUnless(SLOW, "set SAILKIT_SLOW_TESTS=1 for the n=1 instance")
    def test_second_instance_passes(self):
        report = families.verify_family(1, assume_squarefree=True)
        self.assertTrue(report.passed, [c.to_json() for c in report.failed()])
        self.assertEqual(report.values["iota"], 9)


class TestShanks(unittest.TestCase):
    def test_small_parameters(self):
        for a, expected in ((-1, 2), (1, 5), (2, 8)):
            report = families.shanks_verify(a)
            self.assertTrue(report.passed, [c.to_json() for c in report.failed()])
            self.assertEqual(report.values["iota"], expected)
            self.assertEqual(families.shanks_iota_formula(a), expected)

    def test_bruteforce_agrees(self):
        report = families.shanks_verify(1, bruteforce=True)
        self.assertTrue(report.check("g_bruteforce").passed)
        self.assertEqual(report.values["iota_bruteforce"], 5)

    def test_report_json(self):
        data = families.shanks_verify(-1).to_json()
        self.assertTrue(data["passed"])
        self.assertEqual(data["kind"], "shanks")
        self.assertFalse(data["conditional"])


class TestRankBounds(unittest.TestCase):
    def test_lattice_vector_counts(self):
        self.assertEqual(families.C(12, 2), 480)
        self.assertEqual(families.C(12, 2, override=True), 264)
        self.assertEqual(families.C(16, 2, override=True), 480)
        self.assertEqual(families.C(4, 4), 240)
        with self.assertRaises(DegenerateInput):
            families.C(0, 2)

    def test_kitaoka_bound(self):
        bound = families.kitaoka_bound(3)
        self.assertEqual((bound.u_max, bound.floor_max, bound.sqrt_bound), (131, 65, 133))
        self.assertIn("override_source", bound.to_json())
        plain = families.kitaoka_bound(3, override=False)
        self.assertEqual((plain.u_max, plain.floor_max, plain.sqrt_bound), (239, 119, 241))

    def test_rank_lower_bound(self):
        self.assertTrue(families.is_rank_admissible(131, 3, True, True))
        self.assertFalse(families.is_rank_admissible(132, 3, True, True))
        self.assertEqual(families.rank_lower_bound(132, True, True), 4)
        self.assertEqual(families.rank_lower_bound(6), 1)

    def test_usr_bound(self):
        bound = families.usr_lower_bound(5, 3)
        self.assertEqual(bound.sgnrk, 3)
        self.assertEqual((bound.radicand, bound.u), (15, 6))
        self.assertEqual(bound.R_cls_min, 1)
        self.assertTrue(bound.u_exceeds_sqrt_minus_3)

    def test_usr_bound_needs_signature_rank_three(self):
        with mock.patch("units.field_signature_rank", return_value=2):
            with self.assertRaises(NotApplicable):
                families.usr_lower_bound(5, 3)


if __name__ == "__main__":
    unittest.main()
