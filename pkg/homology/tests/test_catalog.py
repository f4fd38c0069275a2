from django.test import SimpleTestCase

from homology.algebra import IncompatibleCharacteristic, KnowledgeableFrobenius, validate_knowledgeable
from homology.catalog import (
    CATALOG,
    UnknownAlgebra,
    builtin,
    hk_plus_k,
    khovanov_pair,
    lee_pair,
    m2k_plus_k,
    modp_X,
    truncated_poly,
)
from homology.linalg import FieldSpec

GF2 = FieldSpec(2)
GF3 = FieldSpec(3)
GF5 = FieldSpec(5)


class CatalogTest(SimpleTestCase):
    def test_graded_pairs_satisfy_all_axioms(self):
        for pair in (khovanov_pair(GF2), truncated_poly(GF3), modp_X(GF5), lee_pair(GF2),
                     builtin("barnatan_pair", GF2)):
            with self.subTest(pair=pair.name):
                report = validate_knowledgeable(pair)
                self.assertTrue(report.ok, report.failures)

    def test_state_sum_pairs_satisfy_pair_axioms(self):
        for pair in (m2k_plus_k(GF5), m2k_plus_k(GF5, "alternative"), hk_plus_k(GF5)):
            with self.subTest(pair=pair.name):
                report = validate_knowledgeable(pair)
                structural = {k: v for k, v in report.failures.items() if not k.startswith("euler.")}
                self.assertEqual(structural, {})
                self.assertEqual(pair.C.dim, 2)

    def test_characteristic_is_enforced(self):
        with self.assertRaises(IncompatibleCharacteristic):
            khovanov_pair(GF3)
        with self.assertRaises(IncompatibleCharacteristic):
            m2k_plus_k(GF2)

    def test_non_strict_builds_counterexample(self):
        self.assertIsInstance(khovanov_pair(GF3, strict=False), KnowledgeableFrobenius)

    def test_truncated_poly_defaults_to_characteristic(self):
        self.assertEqual(truncated_poly(GF5).A.dim, 5)

    def test_modp_X_needs_odd_prime(self):
        with self.assertRaises(IncompatibleCharacteristic):
            modp_X(GF2)

    def test_builtin_unknown_name(self):
        with self.assertRaises(UnknownAlgebra):
            builtin("nope", GF2)

    def test_builtin_bad_parameter(self):
        with self.assertRaises(UnknownAlgebra):
            builtin("barnatan_pair", GF2, {"alpha": 2})

    def test_builtin_ignores_unset_parameters(self):
        f = builtin("c_ht", GF2, {"h": 1, "t": None})
        self.assertEqual(f.dim, 2)

    def test_unknown_filtration(self):
        with self.assertRaises(UnknownAlgebra):
            m2k_plus_k(GF5, "other")

    def test_every_entry_is_described(self):
        for name, entry in CATALOG.items():
            self.assertEqual(entry.name, name)
            self.assertTrue(entry.description)
