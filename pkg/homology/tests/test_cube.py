import numpy as np
from django.test import SimpleTestCase

from homology.algebra import AlgebraNotKnowledgeable
from homology.catalog import barnatan_pair, c_ht, khovanov_pair
from homology.cube import realize_cube, tensor_index_map
from homology.linalg import FieldSpec
from homology.tangle import SaddleKind, build_cube, parse_diagram

GF2 = FieldSpec(2)

TPRIME = "in 2 / orient u u / XO 1 / XO 1"


class RealizeTest(SimpleTestCase):
    def test_vertex_spaces(self):
        realized = realize_cube(build_cube(parse_diagram(TPRIME), 1), barnatan_pair(GF2))
        self.assertEqual(realized.vertices[frozenset()].dims, (2, 2))
        self.assertEqual(realized.vertices[frozenset({1, 2})].dim, 8)
        self.assertEqual(sorted(realized.vertices[frozenset({1, 2})].factors), ["arc", "arc", "circle"])

    def test_edges_have_vertex_shapes(self):
        realized = realize_cube(build_cube(parse_diagram(TPRIME), 1), khovanov_pair(GF2))
        for (alpha, j), m in realized.edges.items():
            target = realized.vertices[alpha | {j}]
            self.assertEqual(m.shape, (target.dim, realized.vertices[alpha].dim))

    def test_degree_shift(self):
        realized = realize_cube(build_cube(parse_diagram(TPRIME), 1), khovanov_pair(GF2))
        self.assertEqual(sorted(realized.vertices[frozenset()].degrees), [-2, 0, 0, 2])
        self.assertEqual(sorted(realized.vertices[frozenset({1})].degrees), [0, 2, 2, 4])

    def test_closed_algebra_rejects_arcs(self):
        with self.assertRaises(AlgebraNotKnowledgeable):
            realize_cube(build_cube(parse_diagram(TPRIME), 1), c_ht(GF2))

    def test_merge_uses_closed_multiplication(self):
        hopf = parse_diagram("in 0 / CUP 1 u / CUP 3 u / XO 2 / XO 2 / CAP 1 / CAP 1")
        cube = build_cube(hopf, 1)
        self.assertIs(cube.edges[(frozenset(), 1)].kind, SaddleKind.MERGE)
        C = c_ht(GF2)
        realized = realize_cube(cube, C)
        self.assertTrue(np.array_equal(realized.edges[(frozenset(), 1)], C.mult))

    def test_tensor_index_map(self):
        self.assertEqual(list(tensor_index_map((2, 3), [1, 0])), [0, 3, 1, 4, 2, 5])
