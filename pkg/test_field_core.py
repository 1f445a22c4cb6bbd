#!/usr/bin/env python3
"""
Tests for field_core: exact arithmetic, integral bases, signs and square roots
"""
import math
import os
import random
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import field_core
import sailconfig
from field_core import (
    Biquadratic,
    Quadratic,
    SimplestCubic,
    SignatureVector,
    element_from_json,
    element_to_json,
    embedding_interval,
    f2_rank,
    inverse,
    is_in_codifferent,
    is_integral,
    is_totally_positive,
    is_unit,
    make_field,
    multiply,
    norm,
    numeric_embeddings,
    power,
    sign_at_embedding,
    signature,
    split_square,
    square_root,
    squarefree_part,
    trace,
)
from sail_errors import DegenerateBiquadratic, MonogenicityUnknown, NonSquarefree, PrecisionExhausted


class TestIntegerHelpers(unittest.TestCase):
    def test_squarefree_part_and_split(self):
        self.assertEqual(squarefree_part(12), 3)
        self.assertEqual(squarefree_part(-12), -3)
        self.assertEqual(split_square(Fraction(12)), (3, Fraction(2)))
        c, g = split_square(Fraction(5, 4))
        self.assertEqual(c * g * g, Fraction(5, 4))

    def test_pluggable_squarefree_tester(self):
        self.assertTrue(field_core.is_squarefree(15))
        self.assertFalse(field_core.is_squarefree(18))
        self.assertFalse(field_core.is_squarefree(15, tester=lambda n: False))

    def test_f2_rank(self):
        self.assertEqual(f2_rank([(1, 0), (0, 1), (1, 1)]), 2)
        self.assertEqual(f2_rank([(0, 0, 0)]), 0)


class TestFieldConstruction(unittest.TestCase):
    def test_quadratic_discriminants(self):
        self.assertEqual(make_field(Quadratic(2)).discriminant, 8)
        self.assertEqual(make_field(Quadratic(3)).discriminant, 12)
        self.assertEqual(make_field(Quadratic(5)).discriminant, 5)

    def test_quadratic_integral_basis_uses_golden_ratio(self):
        F = make_field(Quadratic(5))
        self.assertEqual(F.integral_basis[1], F.element([Fraction(1, 2), Fraction(1, 2)]))

    def test_biquadratic_discriminants(self):
        self.assertEqual(make_field(Biquadratic(2, 3)).discriminant, 2304)
        K = make_field(Biquadratic(5, 3))
        self.assertEqual(K.discriminant, 3600)
        self.assertEqual(K.radicands, (1, 5, 3, 15))

    def test_cubic_discriminant(self):
        self.assertEqual(make_field(SimplestCubic(1)).discriminant, 169)
        self.assertEqual(make_field(SimplestCubic(-1)).discriminant, 49)

    def test_rejected_descriptors(self):
        with self.assertRaises(NonSquarefree):
            make_field(Quadratic(4))
        with self.assertRaises(NonSquarefree):
            make_field(Quadratic(1))
        with self.assertRaises(DegenerateBiquadratic):
            make_field(Biquadratic(2, 2))
        with self.assertRaises(MonogenicityUnknown):
            make_field(SimplestCubic(0))

    def test_fields_are_shared(self):
        self.assertIs(make_field(Quadratic(7)), make_field(Quadratic(7)))


class TestArithmetic(unittest.TestCase):
    def setUp(self):
        self.F = make_field(Quadratic(2))
        self.K = make_field(Biquadratic(5, 3))

    def test_norm_trace_inverse(self):
        eps = self.F.element([1, 1])
        self.assertEqual(norm(eps), -1)
        self.assertEqual(trace(self.F.element([3, 1])), 6)
        self.assertEqual(eps * inverse(eps), 1)
        self.assertEqual(power(eps, -2) * power(eps, 2), 1)

    def test_biquadratic_products(self):
        s5, s3, s15 = (self.K.basis_element(k) for k in (1, 2, 3))
        self.assertEqual(s5 * s3, s15)
        self.assertEqual(s15 * s15, 15)
        self.assertEqual(s5 * s15, 5 * s3)

    def test_integrality_and_units(self):
        half = self.K.element([Fraction(3, 2), Fraction(1, 2), 0, 0])
        self.assertTrue(is_integral(half))
        self.assertTrue(is_unit(half))
        self.assertFalse(is_integral(self.K.element([Fraction(1, 2), 0, 0, 0])))

    def test_codifferent(self):
        self.assertTrue(is_in_codifferent(self.F.element([Fraction(1, 2), Fraction(-1, 4)])))
        self.assertFalse(is_in_codifferent(self.F.element([Fraction(1, 3), 0])))

    def test_json_encoding(self):
        alpha = self.K.element([Fraction(3, 2), Fraction(1, 2), 0, 0])
        self.assertEqual(element_from_json(element_to_json(alpha)), alpha)


class TestSigns(unittest.TestCase):
    def setUp(self):
        self.F = make_field(Quadratic(2))
        self.K = make_field(Biquadratic(5, 3))
        self.saved = (sailconfig.PRECISION_BITS, sailconfig.MAX_PRECISION_BITS)

    def tearDown(self):
        sailconfig.PRECISION_BITS, sailconfig.MAX_PRECISION_BITS = self.saved

    def test_total_positivity(self):
        self.assertTrue(is_totally_positive(make_field(Quadratic(3)).element([2, 1])))
        self.assertFalse(is_totally_positive(self.F.element([1, 1])))

    def test_signature_conventions(self):
        self.assertEqual(signature(self.K.element([-1, 0, 0, 0])), SignatureVector((1, 1, 1, 1)))
        self.assertEqual(signature(self.K.basis_element(1)), SignatureVector((0, 1, 0, 1)))
        self.assertEqual(signature(self.K.basis_element(2)), SignatureVector((0, 0, 1, 1)))
        self.assertEqual(signature(self.K.basis_element(3)), SignatureVector((0, 1, 1, 0)))

    def test_sign_survives_low_starting_precision(self):
        tiny = self.F.element([577, -408])
        expected = sign_at_embedding(tiny, 0)
        sailconfig.PRECISION_BITS = 4
        self.assertEqual(sign_at_embedding(tiny, 0), expected)
        self.assertEqual(expected, 1)

    def test_precision_cap(self):
        sailconfig.PRECISION_BITS = 4
        sailconfig.MAX_PRECISION_BITS = 4
        with self.assertRaises(PrecisionExhausted):
            sign_at_embedding(self.F.element([577, -408]), 0)

    def test_signature_is_additive(self):
        rng = random.Random(7)
        for _ in range(25):
            a = self.K.element([rng.randint(-9, 9) or 1 for _ in range(4)])
            b = self.K.element([rng.randint(-9, 9) or 1 for _ in range(4)])
            self.assertEqual(signature(a * b), signature(a) + signature(b))

    def test_interval_encloses_embedding(self):
        lo, hi = embedding_interval(self.F.basis_element(1), 0, 32)
        self.assertTrue(0 < lo <= hi)
        self.assertTrue(lo * lo <= 2 <= hi * hi)

    def test_trace_matches_embeddings(self):
        alpha = self.K.element([1, 2, -3, Fraction(1, 2)])
        total = sum(numeric_embeddings(alpha, 80))
        self.assertLess(abs(float(total) - float(trace(alpha))), 1e-12)


def exact_quadratic_sign(x: Fraction, y: Fraction, D: int) -> int:
    """Sign of x + y sqrt(D) by comparing squares."""
    if x >= 0 and y >= 0:
        return 1 if x or y else 0
    if x <= 0 and y <= 0:
        return -1
    if x > 0:
        return 1 if x * x > y * y * D else -1
    return 1 if y * y * D > x * x else -1


class TestRandomElements(unittest.TestCase):
    def setUp(self):
        self.saved = (sailconfig.PRECISION_BITS, sailconfig.MAX_PRECISION_BITS)

    def tearDown(self):
        sailconfig.PRECISION_BITS, sailconfig.MAX_PRECISION_BITS = self.saved

    def test_signs_survive_precision_refinement(self):
        rng = random.Random(2026)
        fields = [make_field(Quadratic(D)) for D in (2, 3, 5, 7, 13, 19)]
        sailconfig.PRECISION_BITS = 8
        for _ in range(1000):
            F = rng.choice(fields)
            D = F.descriptor.D
            y = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 4))
            # half the samples sit next to a root of x^2 - D y^2, where low precision cannot decide
            if rng.random() < 0.5:
                x = Fraction(math.isqrt(int(D * y * y)) + rng.randint(-1, 1))
            else:
                x = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 4))
            alpha = F.element([x, y])
            self.assertEqual(sign_at_embedding(alpha, 0), exact_quadratic_sign(x, y, D), f"{alpha}")
            self.assertEqual(sign_at_embedding(alpha, 1), exact_quadratic_sign(x, -y, D), f"{alpha}")

    def test_ring_axioms(self):
        rng = random.Random(11)
        fields = [make_field(Quadratic(5)), make_field(Biquadratic(5, 3)), make_field(SimplestCubic(1))]

        def sample(F):
            return F.element([Fraction(rng.randint(-20, 20), rng.randint(1, 3)) for _ in range(F.degree)])

        for F in fields:
            one = F.one()
            for _ in range(100):
                a, b, c = sample(F), sample(F), sample(F)
                self.assertEqual(multiply(multiply(a, b), c), multiply(a, multiply(b, c)))
                self.assertEqual(multiply(a, b + c), multiply(a, b) + multiply(a, c))
                self.assertEqual(multiply(a, b), multiply(b, a))
                self.assertEqual(multiply(a, one), a)
                if not a.is_zero():
                    self.assertEqual(multiply(a, inverse(a)), one)
                    self.assertEqual(norm(inverse(a)) * norm(a), 1)


class TestSquareRoots(unittest.TestCase):
    def test_square_root_found(self):
        F = make_field(Quadratic(2))
        eps = F.element([1, 1])
        self.assertEqual(square_root(eps * eps), eps)
        self.assertEqual(square_root(F.element([2, 0])), F.basis_element(1))

    def test_square_root_absent(self):
        F = make_field(Quadratic(2))
        self.assertIsNone(square_root(F.element([3, 0])))
        self.assertIsNone(square_root(F.element([-1, 0])))

    def test_square_root_in_biquadratic(self):
        K = make_field(Biquadratic(2, 5))
        root = K.element([Fraction(3, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)])
        self.assertEqual(square_root(root * root), root)


if __name__ == "__main__":
    unittest.main()
