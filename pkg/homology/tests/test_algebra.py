import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from homology.algebra import (
    AlgebraFormatError,
    GradingAbsent,
    GradingMode,
    NotStronglySeparable,
    associated_graded,
    cardy_lhs,
    check_barnatan,
    check_euler_degrees,
    dump_algebra,
    idempotents_PQ,
    is_strongly_separable,
    is_symmetric,
    load_algebra,
    opposite,
    state_sum_kfrob,
    validate_frobenius,
    validate_knowledgeable,
    window,
)
from homology.catalog import a_ht, barnatan_pair, c_ht, khovanov_pair, matrix_algebra, quaternion
from homology.linalg import FieldSpec, rank

GF2 = FieldSpec(2)
GF3 = FieldSpec(3)
GF5 = FieldSpec(5)
QQ = FieldSpec(0)


class FrobeniusAxiomsTest(SimpleTestCase):
    @given(st.sampled_from([0, 2, 3, 5]), st.integers(min_value=-2, max_value=2),
           st.integers(min_value=-2, max_value=2))
    @settings(max_examples=40, deadline=None)
    def test_quadratic_algebras_are_frobenius(self, p, h, t):
        field = FieldSpec(p)
        for f in (c_ht(field, h, t), a_ht(field, h, t)):
            report = validate_frobenius(f)
            self.assertTrue(report.ok, report.failures)

    def test_grading_follows_parameters(self):
        self.assertIs(c_ht(GF2).grading_mode, GradingMode.GRADED)
        self.assertIs(c_ht(GF2, 1, 0).grading_mode, GradingMode.FILTERED)

    def test_matrix_algebra_is_symmetric_not_commutative(self):
        f = matrix_algebra(GF5, 2, 1)
        report = validate_frobenius(f)
        self.assertTrue(report.ok, report.failures)
        self.assertFalse(report.flags["commutative"])
        self.assertTrue(is_symmetric(f))

    def test_quaternions(self):
        report = validate_frobenius(quaternion(GF5, 1))
        self.assertTrue(report.ok, report.failures)

    def test_opposite_reverses_products(self):
        f = matrix_algebra(QQ, 2, 1)
        g = opposite(f)
        x, y = f.basis_vector(1), f.basis_vector(2)
        self.assertTrue(np.array_equal(g.product(x, y), f.product(y, x)))


class KnowledgeableTest(SimpleTestCase):
    def test_khovanov_pair_in_characteristic_two(self):
        report = validate_knowledgeable(khovanov_pair(GF2))
        self.assertTrue(report.ok, report.failures)

    def test_khovanov_pair_fails_cardy_in_characteristic_three(self):
        report = validate_knowledgeable(khovanov_pair(GF3, strict=False))
        self.assertFalse(report.checks["cardy"])
        self.assertEqual(report.failures["cardy"], (1, 0))

    def test_cardy_lhs_of_barnatan_pair_is_identity(self):
        k = barnatan_pair(GF2)
        self.assertTrue(np.array_equal(cardy_lhs(k), GF2.eye(2)))

    def test_barnatan_relations(self):
        for c in (c_ht(GF2), c_ht(GF2, 1, 0), c_ht(QQ, 0, 1)):
            report = check_barnatan(c)
            self.assertTrue(report.ok, report.failures)

    def test_euler_degrees(self):
        report = check_euler_degrees(khovanov_pair(GF2))
        self.assertTrue(report.ok, report.failures)

    def test_euler_degrees_need_a_grading(self):
        k = state_sum_kfrob(matrix_algebra(GF5, 2, 1))
        with self.assertRaises(GradingAbsent):
            check_euler_degrees(k)

    def test_associated_graded_of_barnatan_is_khovanov(self):
        gr = associated_graded(barnatan_pair(GF2))
        khovanov = khovanov_pair(GF2)
        self.assertTrue(gr.A.same_structure(khovanov.A))
        self.assertTrue(gr.C.same_structure(khovanov.C))
        self.assertIs(gr.A.grading_mode, GradingMode.GRADED)


class SeparabilityTest(SimpleTestCase):
    def test_window_of_truncated_algebra_vanishes_in_characteristic_two(self):
        a, a_inv = window(a_ht(GF2))
        self.assertEqual(list(a), [0, 0])
        self.assertIsNone(a_inv)
        self.assertFalse(is_strongly_separable(a_ht(GF2)))

    def test_matrix_algebra_separability_depends_on_characteristic(self):
        self.assertTrue(is_strongly_separable(matrix_algebra(GF5, 2, 1)))
        self.assertFalse(is_strongly_separable(matrix_algebra(GF2, 2, 1)))

    def test_state_sum_of_matrix_algebra_has_one_dimensional_centre(self):
        k = state_sum_kfrob(matrix_algebra(GF5, 2, 1))
        self.assertEqual(k.C.dim, 1)
        report = validate_knowledgeable(k)
        self.assertTrue(report.ok, report.failures)

    def test_state_sum_of_a_ht_matches_barnatan_pair(self):
        k = state_sum_kfrob(a_ht(GF2, 1, 0))
        expected = barnatan_pair(GF2)
        self.assertTrue(np.array_equal(k.C.mu, expected.C.mu))
        self.assertTrue(np.array_equal(k.C.delta, expected.C.delta))
        self.assertTrue(np.array_equal(k.iota, expected.iota))
        self.assertTrue(np.array_equal(k.iota_star, expected.iota_star))

    def test_state_sum_requires_invertible_window(self):
        with self.assertRaises(NotStronglySeparable):
            state_sum_kfrob(a_ht(GF2))

    def test_idempotents(self):
        f = matrix_algebra(GF5, 2, 1)
        P, Q = idempotents_PQ(f, 2, 2)
        self.assertTrue(np.array_equal(GF5.matmul(P, P), P))
        self.assertTrue(np.array_equal(GF5.matmul(Q, Q), Q))
        P11, _ = idempotents_PQ(f, 1, 1)
        self.assertTrue(np.array_equal(P11, GF5.eye(4)))

    def test_central_idempotent_rank(self):
        f = matrix_algebra(GF5, 2, 1)
        _, Q = idempotents_PQ(f, 1, 1)
        self.assertEqual(rank(Q, GF5), 1)


class DocumentTest(SimpleTestCase):
    def test_dump_and_load_pair(self):
        k = barnatan_pair(GF2)
        loaded = load_algebra(dump_algebra(k))
        self.assertTrue(loaded.A.same_structure(k.A))
        self.assertTrue(loaded.C.same_structure(k.C))
        self.assertEqual(loaded.name, "barnatan_pair")

    def test_rational_entries_serialise_as_strings(self):
        doc = dump_algebra(matrix_algebra(QQ, 2, 2))
        self.assertIn("1/2", doc["eps"])

    def test_bad_version(self):
        with self.assertRaises(AlgebraFormatError):
            load_algebra({"version": 99})

    def test_missing_field(self):
        doc = dump_algebra(c_ht(GF2))
        del doc["mu"]
        with self.assertRaises(AlgebraFormatError):
            load_algebra(doc)


class SeparabilityGridTest(SimpleTestCase):
    def test_c_ht_is_strongly_separable_off_the_discriminant(self):
        for field in (GF2, GF3, GF5, QQ):
            for h in range(-2, 3):
                for t in range(-2, 3):
                    with self.subTest(field=str(field), h=h, t=t):
                        expected = field.element(h * h + 4 * t) != 0
                        self.assertEqual(is_strongly_separable(c_ht(field, h, t)), expected)


class IdempotentCompositionTest(SimpleTestCase):
    def algebras(self):
        return [
            (GF2, a_ht(GF2, 1, 0)),
            (GF5, matrix_algebra(GF5, 2, 1)),
            (GF5, quaternion(GF5, 1)),
        ]

    def test_quaternions_over_f5_are_strongly_separable(self):
        self.assertTrue(is_strongly_separable(quaternion(GF5, 1)))

    def test_compositions_collapse(self):
        for field, f in self.algebras():
            maps = {(j, l): idempotents_PQ(f, j, l) for j in range(1, 4) for l in range(1, 4)}
            for j in range(1, 4):
                for l in range(1, 4):
                    for m in range(1, 4):
                        with self.subTest(algebra=f.basis, j=j, l=l, m=m):
                            P_jl, Q_jl = maps[(j, l)]
                            P_lm, Q_lm = maps[(l, m)]
                            P_jm, Q_jm = maps[(j, m)]
                            self.assertTrue(np.array_equal(field.matmul(P_jl, P_lm), P_jm))
                            self.assertTrue(np.array_equal(field.matmul(Q_jl, Q_lm), Q_jm))
