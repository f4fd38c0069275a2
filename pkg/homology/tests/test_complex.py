import random

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from homology.algebra import GradingMode
from homology.catalog import barnatan_pair, c_ht, khovanov_pair, modp_X
from homology.complex import (
    Polynomial2,
    format_laurent,
    graded_euler_characteristic,
    homology_bigraded,
    homology_generators,
    homology_ranks,
    poincare_polynomial,
    result_document,
    total_complex,
    verify_complex,
)
from homology.cube import realize_cube
from homology.generators import random_slice_word
from homology.linalg import FieldSpec
from homology.oracles import normalized_bracket
from homology.tangle import TangleDiagram, build_cube, parse_diagram

GF2 = FieldSpec(2)
GF5 = FieldSpec(5)
QQ = FieldSpec(0)

TPRIME = "in 2 / orient u u / XO 1 / XO 1"
T = "in 2 / orient u u / XO 1 / XU 1"
UNKNOT = "in 0 / CUP 1 u / CAP 1"
HOPF = "in 0 / CUP 1 u / CUP 3 u / XO 2 / XO 2 / CAP 1 / CAP 1"
TREFOIL = "in 0 / CUP 1 u / CUP 3 d / XO 2 / XO 2 / XO 2 / CAP 1 / CAP 1"


def complex_of(text, algebra, epsilon=1):
    return total_complex(realize_cube(build_cube(parse_diagram(text), epsilon), algebra))


class TotalComplexTest(SimpleTestCase):
    def test_tprime_dimensions(self):
        c = complex_of(TPRIME, barnatan_pair(GF2))
        self.assertEqual({r: c.dim(r) for r in c.r_range}, {0: 4, 1: 8, 2: 8})
        self.assertIs(c.mode, GradingMode.FILTERED)

    def test_homological_shift(self):
        c = complex_of(T, khovanov_pair(GF2))
        self.assertEqual(c.r_range, [-1, 0, 1])

    @given(st.sampled_from([TPRIME, T, HOPF, TREFOIL]), st.sampled_from([1, -1]))
    @settings(max_examples=16, deadline=None)
    def test_differential_squares_to_zero(self, text, epsilon):
        for algebra in (khovanov_pair(GF2), barnatan_pair(GF2)):
            report = verify_complex(complex_of(text, algebra, epsilon))
            self.assertTrue(report.ok, report.failures)

    def test_random_tangles_square_to_zero(self):
        rng = random.Random(2024)
        algebras = [khovanov_pair(GF2), barnatan_pair(GF2), modp_X(GF5)]
        for n in range(200):
            k = algebras[n % len(algebras)]
            # the five-dimensional algebra only sees small boundaries
            small = k.A.dim > 2
            while True:
                word = random_slice_word(rng, rng.randint(0, 2 if small else 3), in_count=rng.randint(1, 2))
                d = TangleDiagram.from_word(word)
                if not small or d.p + d.q <= 4:
                    break
            epsilon = rng.choice((1, -1))
            with self.subTest(n=n, word=word.to_text(), epsilon=epsilon):
                c = total_complex(realize_cube(build_cube(d, epsilon), k))
                report = verify_complex(c)
                self.assertTrue(report.ok, report.failures)


class HomologyTest(SimpleTestCase):
    def test_tprime_barnatan_polynomial(self):
        dims = homology_bigraded(complex_of(TPRIME, barnatan_pair(GF2)))
        self.assertEqual(poincare_polynomial(dims).canonical(), "A^2 + A^4 + t^2*A^10 + t^2*A^12")
        self.assertEqual(dims.ranks, {(2, 0): 1, (4, 0): 1, (10, 2): 1, (12, 2): 1})

    def test_tprime_khovanov_table(self):
        dims = homology_bigraded(complex_of(TPRIME, khovanov_pair(GF2)))
        expected = {(2, 0): 1, (4, 0): 1, (6, 1): 1, (8, 1): 1, (8, 2): 1, (10, 2): 2, (12, 2): 1}
        self.assertEqual(dims.ranks, expected)

    def test_reidemeister_two_diagram_is_the_identity_tangle(self):
        c = complex_of(T, khovanov_pair(GF2))
        dims = homology_bigraded(c)
        self.assertEqual(poincare_polynomial(dims).canonical(), "A^-2 + 2 + A^2")
        self.assertEqual(homology_ranks(c), {0: 4})
        self.assertEqual(homology_generators(c, 0).shape[1], 4)

    def test_unknot(self):
        c = complex_of(UNKNOT, c_ht(GF2))
        self.assertEqual(homology_bigraded(c).ranks, {(-2, 0): 1, (2, 0): 1})
        self.assertEqual(format_laurent(graded_euler_characteristic(c)), "A^-2 + A^2")

    def test_hopf_rank(self):
        for field in (GF2, QQ):
            c = complex_of(HOPF, c_ht(field))
            self.assertEqual(sum(homology_ranks(c).values()), 4)

    def test_trefoil_rank_depends_on_characteristic(self):
        self.assertEqual(sum(homology_ranks(complex_of(TREFOIL, c_ht(QQ))).values()), 4)
        self.assertEqual(sum(homology_ranks(complex_of(TREFOIL, c_ht(GF2))).values()), 6)

    def test_euler_characteristic_is_the_normalized_bracket(self):
        for text in (UNKNOT, HOPF, TREFOIL):
            with self.subTest(text=text):
                c = complex_of(text, c_ht(QQ))
                self.assertEqual(format_laurent(graded_euler_characteristic(c)),
                                 format_laurent(normalized_bracket(parse_diagram(text))))

    def test_result_document(self):
        c = complex_of(UNKNOT, c_ht(GF2))
        doc = result_document(c, homology_bigraded(c), "c_ht", 1, 0, 0)
        self.assertEqual(doc["field"], {"char": 2})
        self.assertEqual(doc["homology"], [{"r": 0, "k": -2, "rank": 1}, {"r": 0, "k": 2, "rank": 1}])
        self.assertEqual(doc["polynomial"], "A^-2 + A^2")


class PolynomialTest(SimpleTestCase):
    def test_canonical(self):
        p = Polynomial2({(0, 0): 2, (1, -2): 1, (2, 4): 3, (1, 0): 0})
        self.assertEqual(p.canonical(), "2 + t^1*A^-2 + 3*t^2*A^4")

    def test_zero(self):
        self.assertEqual(Polynomial2({}).canonical(), "0")
