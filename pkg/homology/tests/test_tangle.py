from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from homology.tangle import (
    MalformedInput,
    OrientationMismatch,
    SaddleKind,
    SliceKind,
    build_cube,
    crossing_signs,
    gap_shaded,
    mirror,
    parse_diagram,
    parse_slice_word,
    points_up,
    resolve,
    saddle_classify,
    vertex_order,
)

TPRIME = "in 2 / orient u u / XO 1 / XO 1"
T = "in 2 / orient u u / XO 1 / XU 1"
UNKNOT = "in 0 / CUP 1 u / CAP 1"
HOPF = "in 0 / CUP 1 u / CUP 3 u / XO 2 / XO 2 / CAP 1 / CAP 1"
TREFOIL = "in 0 / CUP 1 u / CUP 3 d / XO 2 / XO 2 / XO 2 / CAP 1 / CAP 1"


class ParseTest(SimpleTestCase):
    def test_slash_and_lines_agree(self):
        inline = parse_slice_word(TPRIME)
        lines = parse_slice_word("tangle v1\nin 2\norient u u\nXO 1\nXO 1  # twist\nend\n")
        self.assertEqual(inline, lines)

    def test_to_text_parses_back(self):
        word = parse_slice_word(TREFOIL)
        self.assertEqual(parse_slice_word(word.to_text()), word)

    def test_errors(self):
        cases = [
            "in 1 / orient u / XO 1",
            "in 2 / orient u",
            "in 2 / XO 1",
            "in 0 / FOO 1",
            "in 0 / CUP 1 x",
            "in 0 / CUP 2 u",
            "tangle v2 / in 0",
            "in 0 / CAP",
        ]
        for text in cases:
            with self.subTest(text=text):
                with self.assertRaises(MalformedInput):
                    parse_slice_word(text)

    def test_cap_needs_opposite_orientations(self):
        with self.assertRaises(OrientationMismatch):
            parse_slice_word("in 2 / orient u u / CAP 1")


class DiagramTest(SimpleTestCase):
    def test_signs(self):
        self.assertEqual((parse_diagram(TPRIME).n_plus, parse_diagram(TPRIME).n_minus), (2, 0))
        self.assertEqual((parse_diagram(T).n_plus, parse_diagram(T).n_minus), (1, 1))
        self.assertEqual((parse_diagram(HOPF).n_plus, parse_diagram(HOPF).n_minus), (0, 2))
        self.assertEqual((parse_diagram(TREFOIL).n_plus, parse_diagram(TREFOIL).n_minus), (3, 0))

    def test_crossing_signs(self):
        self.assertEqual(crossing_signs(parse_diagram(T)), (1, 1))

    def test_mirror_swaps_signs(self):
        m = mirror(parse_diagram(TREFOIL))
        self.assertEqual((m.n_plus, m.n_minus), (0, 3))
        self.assertTrue(all(s.kind is not SliceKind.XO for s in m.word.slices))

    def test_boundary(self):
        d = parse_diagram(TPRIME)
        self.assertEqual((d.p, d.q, d.n, d.height), (2, 2, 2, 2))
        self.assertFalse(d.is_link)
        self.assertTrue(parse_diagram(UNKNOT).is_link)

    def test_crossing_ports(self):
        c = parse_diagram(TPRIME).crossings[1]
        self.assertEqual(c.ports, ((1, 1), (1, 2), (2, 1), (2, 2)))


class ResolutionTest(SimpleTestCase):
    def test_checkerboard(self):
        self.assertTrue(gap_shaded(0, 1))
        self.assertFalse(gap_shaded(0, -1))
        self.assertTrue(points_up((3, 1), 1))
        self.assertFalse(points_up((3, 2), 1))

    def test_tprime_smoothings(self):
        d = parse_diagram(TPRIME)
        self.assertEqual(resolve(d, frozenset(), 1).type_word, (1, 1))
        self.assertEqual(resolve(d, frozenset({1}), 1).type_word, (1, 1))
        both = resolve(d, frozenset({1, 2}), 1)
        self.assertEqual((both.n_arcs, both.n_circles), (2, 1))

    def test_arc_endpoints(self):
        res = resolve(parse_diagram(TPRIME), frozenset(), 1)
        up, down = res.components
        self.assertEqual((up.start.name, up.end.name), ("b1", "t1"))
        self.assertEqual(up.pieces, (("in", 1), ("x", 0, 0), ("x", 1, 0)))
        # position 2 points down for epsilon = +1
        self.assertEqual((down.start.name, down.end.name), ("t2", "b2"))
        self.assertEqual(down.pieces, (("x", 1, 1), ("x", 0, 1), ("in", 2)))

    def test_circle_pieces(self):
        res = resolve(parse_diagram(UNKNOT), frozenset(), 1)
        (circle,) = res.components
        self.assertTrue(circle.closed)
        self.assertEqual(sorted(p[0] for p in circle.pieces), ["cap", "cup"])

    @given(st.sampled_from([TPRIME, T, HOPF, TREFOIL]), st.sampled_from([1, -1]), st.data())
    def test_every_node_lies_on_one_component(self, text, epsilon, data):
        d = parse_diagram(text)
        alpha = data.draw(st.frozensets(st.integers(min_value=1, max_value=d.n)))
        res = resolve(d, alpha, epsilon)
        self.assertEqual(set(res.node_index), set(d.nodes()))
        self.assertEqual(sum(len(c.nodes) for c in res.components), len(d.nodes()))


class SaddleTest(SimpleTestCase):
    def test_tprime_saddles(self):
        d = parse_diagram(TPRIME)
        self.assertIs(saddle_classify(d, frozenset(), 1, 1).kind, SaddleKind.ARC_ARC)
        self.assertIs(saddle_classify(d, frozenset({1}), 2, 1).kind, SaddleKind.ARC_TO_CIRCLE_ARC)

    def test_unknot_free_link_saddles(self):
        d = parse_diagram(HOPF)
        kinds = {saddle_classify(d, frozenset(), j, 1).kind for j in (1, 2)}
        self.assertEqual(kinds, {SaddleKind.MERGE})

    def test_already_smoothed(self):
        with self.assertRaises(MalformedInput):
            saddle_classify(parse_diagram(TPRIME), frozenset({1}), 1, 1)

    def test_cube_size(self):
        cube = build_cube(parse_diagram(TREFOIL), 1)
        self.assertEqual(len(cube.vertices), 8)
        self.assertEqual(len(cube.edges), 12)

    def test_bad_epsilon(self):
        with self.assertRaises(MalformedInput):
            build_cube(parse_diagram(TPRIME), 0)

    def test_vertex_order(self):
        self.assertEqual(vertex_order(2), [frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})])
