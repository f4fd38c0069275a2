import random

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from homology.generators import (
    MAX_WIDTH,
    NoMoveSite,
    random_link,
    random_move_pairs,
    random_slice_word,
    reidemeister_pair,
)
from homology.tangle import SliceKind, TangleDiagram, parse_slice_word


class RandomWordTest(SimpleTestCase):
    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=5))
    @settings(max_examples=50, deadline=None)
    def test_word_is_valid(self, seed, crossings):
        word = random_slice_word(random.Random(seed), crossings)
        d = TangleDiagram.from_word(word)
        self.assertEqual(d.n, crossings)
        self.assertTrue(all(len(level) <= MAX_WIDTH for level in d.orientations))

    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=4))
    @settings(max_examples=50, deadline=None)
    def test_link_is_closed(self, seed, crossings):
        d = TangleDiagram.from_word(random_link(random.Random(seed), crossings))
        self.assertTrue(d.is_link)
        self.assertEqual(d.n, crossings)
        self.assertGreater(d.height, 0)

    def test_seeded(self):
        self.assertEqual(random_slice_word(random.Random(7), 3), random_slice_word(random.Random(7), 3))


class MoveTest(SimpleTestCase):
    def test_crossings_added(self):
        rng = random.Random(1)
        word = parse_slice_word("in 3 / orient u d u / XO 1")
        for move, added in (("R1", 1), ("R2", 2), ("R3", 0)):
            with self.subTest(move=move):
                pair = reidemeister_pair(word, move, rng)
                before = TangleDiagram.from_word(pair.before)
                after = TangleDiagram.from_word(pair.after)
                self.assertEqual(after.n - before.n, added)
                self.assertEqual(before.orientations[-1], after.orientations[-1])

    def test_r2_pair_is_cancelling(self):
        pair = reidemeister_pair(parse_slice_word("in 2 / orient u u"), "R2", random.Random(0))
        kinds = [s.kind for s in pair.after.slices]
        self.assertEqual(sorted(k.value for k in kinds), ["XO", "XU"])

    def test_r3_needs_three_strands(self):
        with self.assertRaises(NoMoveSite):
            reidemeister_pair(parse_slice_word("in 2 / orient u u / XO 1"), "R3", random.Random(0))

    def test_unknown_move(self):
        with self.assertRaises(NoMoveSite):
            reidemeister_pair(parse_slice_word("in 2 / orient u u"), "R4", random.Random(0))

    def test_move_pairs_are_reproducible(self):
        first = random_move_pairs(3, ["R1", "R2", "R3"], 2, 6)
        second = random_move_pairs(3, ["R1", "R2", "R3"], 2, 6)
        self.assertEqual(first, second)
        self.assertEqual([p.move for p in first], ["R1", "R1", "R2", "R2", "R3", "R3"])
        for pair in first:
            self.assertLessEqual(TangleDiagram.from_word(pair.after).n, 6)

    def test_links_only(self):
        for pair in random_move_pairs(5, ["R1", "R2"], 2, 5, links_only=True):
            self.assertTrue(TangleDiagram.from_word(pair.before).is_link)
            self.assertIn(SliceKind.CAP, {s.kind for s in pair.after.slices})

    def test_r3_skips_levels_with_mixed_outer_strands(self):
        with self.assertRaises(NoMoveSite):
            reidemeister_pair(parse_slice_word("in 3 / orient u u d / CAP 2"), "R3", random.Random(0))

    def test_r3_keeps_later_slices_valid(self):
        word = parse_slice_word("in 3 / orient d u d / CAP 2 / CUP 1 u / CAP 1")
        for seed in range(20):
            pair = reidemeister_pair(word, "R3", random.Random(seed))
            self.assertEqual(pair.site, 0)
            before = TangleDiagram.from_word(pair.before)
            after = TangleDiagram.from_word(pair.after)
            self.assertEqual(before.orientations[-1], after.orientations[-1])

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=100, deadline=None)
    def test_r3_sides_always_parse(self, seed):
        rng = random.Random(seed)
        word = random_slice_word(rng, rng.randint(0, 3), in_count=rng.randint(3, 4))
        try:
            pair = reidemeister_pair(word, "R3", rng)
        except NoMoveSite:
            return
        before = TangleDiagram.from_word(pair.before)
        after = TangleDiagram.from_word(pair.after)
        self.assertEqual(before.n, after.n)
        self.assertEqual(before.orientations[-1], after.orientations[-1])
