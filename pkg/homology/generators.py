"""
Seeded random slice words and Reidemeister moves on them.
"""

import logging
import random
from dataclasses import dataclass
from typing import Optional

from .errors import ComputationError
from .tangle import DOWN, UP, Slice, SliceKind, SliceWord, TangleDiagram

logger = logging.getLogger(__name__)

MAX_WIDTH = 6

PIECE_WEIGHTS = {
    SliceKind.CUP: 0.2,
    SliceKind.CAP: 0.2,
    "crossing": 0.6,
}

# Strands a level needs for each move, which is also the number of crossings it adds.
MOVE_WIDTH = {"R1": 1, "R2": 2, "R3": 3}

MOVES = tuple(MOVE_WIDTH)


class NoMoveSite(ComputationError):
    """Raised when a slice word has no level where the requested move fits"""
    pass


@dataclass(frozen=True)
class MovePair:
    move: str
    before: SliceWord
    after: SliceWord
    site: int

    def as_dict(self) -> dict:
        return {
            "move": self.move,
            "site": self.site,
            "before": self.before.to_text().strip().splitlines(),
            "after": self.after.to_text().strip().splitlines(),
        }


def _flip(o: str) -> str:
    return DOWN if o == UP else UP


def _crossing(rng: random.Random, position: int) -> Slice:
    return Slice(rng.choice((SliceKind.XO, SliceKind.XU)), position)


def _opposite_pairs(strands: list[str]) -> list[int]:
    return [i for i in range(1, len(strands)) if strands[i - 1] != strands[i]]


def _apply(strands: list[str], piece: Slice) -> None:
    i = piece.position
    if piece.kind is SliceKind.CUP:
        strands[i - 1:i - 1] = [piece.orientation, _flip(piece.orientation)]
    elif piece.kind is SliceKind.CAP:
        del strands[i - 1:i + 1]
    else:
        strands[i - 1], strands[i] = strands[i], strands[i - 1]


def random_slice_word(rng: random.Random, crossings: int, in_count: Optional[int] = None,
                      closed: bool = False) -> SliceWord:
    """
    A slice word with exactly `crossings` crossings and at most MAX_WIDTH
    strands at every level. Closed words start and end with no strands.
    """
    if closed:
        in_count = 0
    elif in_count is None:
        in_count = rng.randint(1, 3)
    strands = [rng.choice((UP, DOWN)) for _ in range(in_count)]
    start = tuple(strands)
    slices: list[Slice] = []
    placed = 0
    kinds = list(PIECE_WEIGHTS)
    weights = list(PIECE_WEIGHTS.values())
    while placed < crossings:
        kind = rng.choices(kinds, weights)[0]
        width = len(strands)
        if kind is SliceKind.CUP or width < 2:
            if width + 2 > MAX_WIDTH:
                continue
            piece = Slice(SliceKind.CUP, rng.randint(1, width + 1), rng.choice((UP, DOWN)))
        elif kind is SliceKind.CAP:
            pairs = _opposite_pairs(strands)
            # closed words keep two strands around until the last crossing
            if not pairs or (closed and width <= 2):
                continue
            piece = Slice(SliceKind.CAP, rng.choice(pairs))
        else:
            piece = _crossing(rng, rng.randint(1, width - 1))
            placed += 1
        _apply(strands, piece)
        slices.append(piece)
    if closed:
        while strands:
            piece = Slice(SliceKind.CAP, rng.choice(_opposite_pairs(strands)))
            _apply(strands, piece)
            slices.append(piece)
    if closed and not slices:
        orientation = rng.choice((UP, DOWN))
        slices = [Slice(SliceKind.CUP, 1, orientation), Slice(SliceKind.CAP, 1)]
    word = SliceWord(start, tuple(slices))
    TangleDiagram.from_word(word)
    return word


def random_link(rng: random.Random, crossings: int) -> SliceWord:
    return random_slice_word(rng, crossings, closed=True)


def _levels(word: SliceWord) -> tuple[tuple[str, ...], ...]:
    return TangleDiagram.from_word(word).orientations


def reidemeister_pair(word: SliceWord, move: str, rng: random.Random) -> MovePair:
    """
    Insert the local picture of a Reidemeister move at a random level.

    R1 and R2 pair the word with the word containing a kink or a cancelling
    pair of crossings. R3 pairs the two sides of the triangle move.

    Raises:
        NoMoveSite: If no level of the word is wide enough, or for R3 when
            no three adjacent strands have matching outer orientations
    """
    levels = _levels(word)
    need = MOVE_WIDTH
    if move not in need:
        raise NoMoveSite(f"unknown move '{move}'")
    sites = [s for s, level in enumerate(levels) if len(level) >= need[move]]
    if move == "R1":
        sites = [s for s in sites if len(levels[s]) + 2 <= MAX_WIDTH]
    if move == "R3":
        # the triangle reverses three strands, so the outer two must agree
        spots = [(s, i) for s in sites for i in range(1, len(levels[s]) - 1)
                 if levels[s][i - 1] == levels[s][i + 1]]
        sites = sorted({s for s, _ in spots})
    if not sites:
        raise NoMoveSite(f"{move} needs a level with {need[move]} strands")
    s = rng.choice(sites)
    width = len(levels[s])
    if move == "R1":
        i = rng.randint(1, width)
        kink = (Slice(SliceKind.CUP, i + 1, levels[s][i - 1]), _crossing(rng, i), Slice(SliceKind.CAP, i + 1))
        return MovePair(move, word, word.inserted(s, kink), s)
    if move == "R2":
        i = rng.randint(1, width - 1)
        first = _crossing(rng, i)
        second = Slice(SliceKind.XU if first.kind is SliceKind.XO else SliceKind.XO, i)
        return MovePair(move, word, word.inserted(s, (first, second)), s)
    i = rng.choice([i for t, i in spots if t == s])
    kind = rng.choice((SliceKind.XO, SliceKind.XU))
    left = (Slice(kind, i), Slice(kind, i + 1), Slice(kind, i))
    right = (Slice(kind, i + 1), Slice(kind, i), Slice(kind, i + 1))
    return MovePair(move, word.inserted(s, left), word.inserted(s, right), s)


def random_move_pairs(seed: int, moves: list[str], count: int, n_max: int,
                      links_only: bool = False) -> list[MovePair]:
    """`count` move pairs per move, each side with at most n_max crossings."""
    rng = random.Random(seed)
    out = []
    for move in moves:
        made = 0
        while made < count:
            crossings = rng.randint(0, max(n_max - MOVE_WIDTH[move], 0))
            if links_only:
                word = random_link(rng, crossings)
            else:
                word = random_slice_word(rng, crossings)
            try:
                out.append(reidemeister_pair(word, move, rng))
            except NoMoveSite:
                logger.debug("no %s site in %s", move, word.to_text())
                continue
            made += 1
    return out
