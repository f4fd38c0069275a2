"""
Oriented tangle diagrams written as slice words, and their smoothings.

A diagram is read bottom to top. Level L (0 <= L <= S) is the horizontal
line between slice L and slice L+1; its strand positions are numbered from
1 on the left. A node is a pair (level, position). Slice s joins level s to
level s + 1:

    CAP i      joins positions i and i+1 of level s from above
    CUP i o    creates positions i and i+1 of level s+1, the left leg oriented o
    XO i, XU i cross positions i and i+1; in XO the strand from the lower
               left to the upper right passes over

Smoothings are oriented by the checkerboard rule: the strand through node
(L, i) points up exactly when gap i-1 is shaded, and gap g is shaded when
g is even for ε = +1 and odd for ε = -1.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional

from .errors import ComputationError, InputError

logger = logging.getLogger(__name__)

UP = "u"
DOWN = "d"

ABOVE = "above"
BELOW = "below"

Node = tuple[int, int]
Piece = tuple


class MalformedInput(InputError):
    """Raised when a slice word cannot be parsed or a position is out of range"""
    pass


class OrientationMismatch(InputError):
    """Raised when a cap joins two strands with the same orientation"""
    pass


class SliceKind(Enum):
    CAP = "CAP"
    CUP = "CUP"
    XO = "XO"
    XU = "XU"


class SaddleKind(Enum):
    ARC_ARC = "ArcArc"
    ARC_TO_CIRCLE_ARC = "ArcToCircleArc"
    CIRCLE_ARC_TO_ARC = "CircleArcToArc"
    MERGE = "Merge_CC"
    SPLIT = "Split_CC"


def _flip(o: str) -> str:
    return DOWN if o == UP else UP


# ============================================================================
# Slice words
# ============================================================================


@dataclass(frozen=True)
class Slice:
    kind: SliceKind
    position: int
    orientation: Optional[str] = None

    @property
    def is_crossing(self) -> bool:
        return self.kind in (SliceKind.XO, SliceKind.XU)

    def to_text(self) -> str:
        if self.kind is SliceKind.CUP:
            return f"CUP {self.position} {self.orientation}"
        return f"{self.kind.value} {self.position}"


@dataclass(frozen=True)
class SliceWord:
    in_orientations: tuple[str, ...]
    slices: tuple[Slice, ...]

    @property
    def in_count(self) -> int:
        return len(self.in_orientations)

    def to_text(self) -> str:
        lines = ["tangle v1", f"in {self.in_count}"]
        if self.in_count:
            lines.append("orient " + " ".join(self.in_orientations))
        lines.extend(s.to_text() for s in self.slices)
        lines.append("end")
        return "\n".join(lines) + "\n"

    def mirror(self) -> "SliceWord":
        swapped = {SliceKind.XO: SliceKind.XU, SliceKind.XU: SliceKind.XO}
        return SliceWord(
            self.in_orientations,
            tuple(Slice(swapped.get(s.kind, s.kind), s.position, s.orientation) for s in self.slices),
        )

    def inserted(self, index: int, new: tuple[Slice, ...]) -> "SliceWord":
        return SliceWord(self.in_orientations, self.slices[:index] + tuple(new) + self.slices[index:])


def _tokens(text: str) -> list[list[str]]:
    statements = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        for part in line.split("/"):
            words = part.split()
            if words:
                statements.append(words)
    return statements


def parse_slice_word(text: str) -> SliceWord:
    """
    Parse the line-oriented slice format; " / " may stand in for newlines
    and the `tangle v1` header and `end` trailer are optional.

    Raises:
        MalformedInput: On syntax errors and out-of-range positions
        OrientationMismatch: When a cap joins equally oriented strands
    """
    statements = _tokens(text)
    if statements and statements[0][0] == "tangle":
        if statements[0] != ["tangle", "v1"]:
            raise MalformedInput(f"unsupported header '{' '.join(statements[0])}'")
        statements = statements[1:]
    if statements and statements[-1] == ["end"]:
        statements = statements[:-1]

    in_orientations: tuple[str, ...] = ()
    if statements and statements[0][0] == "in":
        head = statements.pop(0)
        try:
            (count,) = (int(x) for x in head[1:])
        except ValueError as e:
            raise MalformedInput(f"bad 'in' line '{' '.join(head)}'") from e
        if count < 0:
            raise MalformedInput(f"negative strand count {count}")
        if count:
            if not statements or statements[0][0] != "orient":
                raise MalformedInput(f"'in {count}' must be followed by an orient line")
            marks = statements.pop(0)[1:]
            if len(marks) != count or any(m not in (UP, DOWN) for m in marks):
                raise MalformedInput(f"orient line needs {count} marks from 'u'/'d', got {marks}")
            in_orientations = tuple(marks)

    slices = []
    for words in statements:
        try:
            kind = SliceKind(words[0])
        except ValueError as e:
            raise MalformedInput(f"unknown slice '{' '.join(words)}'") from e
        expected = 3 if kind is SliceKind.CUP else 2
        if len(words) != expected:
            raise MalformedInput(f"slice '{' '.join(words)}' needs {expected - 1} arguments")
        try:
            position = int(words[1])
        except ValueError as e:
            raise MalformedInput(f"bad position in '{' '.join(words)}'") from e
        orientation = None
        if kind is SliceKind.CUP:
            orientation = words[2]
            if orientation not in (UP, DOWN):
                raise MalformedInput(f"cup orientation must be 'u' or 'd', got '{orientation}'")
        slices.append(Slice(kind, position, orientation))

    word = SliceWord(in_orientations, tuple(slices))
    _walk(word)
    return word


# ============================================================================
# Diagrams
# ============================================================================


@dataclass(frozen=True)
class Crossing:
    number: int
    slice_index: int
    position: int
    over: bool
    sign: int

    @property
    def ports(self) -> tuple[Node, Node, Node, Node]:
        """Lower left, lower right, upper left, upper right."""
        s, i = self.slice_index, self.position
        return (s, i), (s, i + 1), (s + 1, i), (s + 1, i + 1)


def _walk(word: SliceWord) -> tuple[list[tuple[str, ...]], list[Crossing]]:
    current = list(word.in_orientations)
    levels = [tuple(current)]
    crossings: list[Crossing] = []
    for s, piece in enumerate(word.slices):
        w = len(current)
        i = piece.position
        where = f"slice {s + 1} ({piece.to_text()})"
        if piece.kind is SliceKind.CUP:
            if not 1 <= i <= w + 1:
                raise MalformedInput(f"{where}: position out of range for {w} strands")
            current[i - 1:i - 1] = [piece.orientation, _flip(piece.orientation)]
        else:
            if not 1 <= i < w:
                raise MalformedInput(f"{where}: needs positions {i} and {i + 1} but there are {w} strands")
            left, right = current[i - 1], current[i]
            if piece.kind is SliceKind.CAP:
                if left == right:
                    raise OrientationMismatch(f"{where}: joins two strands oriented '{left}'")
                del current[i - 1:i + 1]
            else:
                over = piece.kind is SliceKind.XO
                sign = (1 if over else -1) * (1 if left == right else -1)
                crossings.append(Crossing(len(crossings) + 1, s, i, over, sign))
                current[i - 1], current[i] = right, left
        levels.append(tuple(current))
    return levels, crossings


@dataclass(frozen=True)
class TangleDiagram:
    word: SliceWord
    orientations: tuple[tuple[str, ...], ...]
    crossings: tuple[Crossing, ...]

    @classmethod
    def from_word(cls, word: SliceWord) -> "TangleDiagram":
        levels, crossings = _walk(word)
        return cls(word, tuple(levels), tuple(crossings))

    @property
    def height(self) -> int:
        return len(self.word.slices)

    @property
    def p(self) -> int:
        return len(self.orientations[0])

    @property
    def q(self) -> int:
        return len(self.orientations[-1])

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def is_link(self) -> bool:
        return self.p == 0 and self.q == 0

    def width(self, level: int) -> int:
        return len(self.orientations[level])

    def crossing_at(self, slice_index: int) -> Crossing:
        for c in self.crossings:
            if c.slice_index == slice_index:
                return c
        raise KeyError(slice_index)

    def nodes(self) -> list[Node]:
        return [(level, k) for level in range(self.height + 1) for k in range(1, self.width(level) + 1)]


def parse_diagram(text: str) -> TangleDiagram:
    return TangleDiagram.from_word(parse_slice_word(text))


def crossing_signs(t: TangleDiagram) -> tuple[int, int]:
    """Counts of positive and negative crossings."""
    return t.n_plus, t.n_minus


def mirror(diagram: TangleDiagram) -> TangleDiagram:
    return TangleDiagram.from_word(diagram.word.mirror())


# ============================================================================
# Smoothings
# ============================================================================


def gap_shaded(gap: int, epsilon: int) -> bool:
    return (gap % 2 == 0) == (epsilon == 1)


def points_up(node: Node, epsilon: int) -> bool:
    return gap_shaded(node[1] - 1, epsilon)


@dataclass(frozen=True)
class _Edge:
    a: Node
    a_side: str
    b: Node
    b_side: str
    piece: Optional[Piece]

    def leaves(self, node: Node, epsilon: int) -> bool:
        side = self.a_side if node == self.a else self.b_side
        up = points_up(node, epsilon)
        return up if side == ABOVE else not up

    def other(self, node: Node) -> Node:
        return self.b if node == self.a else self.a


def _smoothing_edges(diagram: TangleDiagram, alpha: frozenset[int]) -> list[_Edge]:
    edges: list[_Edge] = []

    def straight(s: int, k: int, k_above: int) -> None:
        edges.append(_Edge((s, k), ABOVE, (s + 1, k_above), BELOW, None))

    for s, piece in enumerate(diagram.word.slices):
        w = diagram.width(s)
        i = piece.position
        if piece.kind is SliceKind.CAP:
            edges.append(_Edge((s, i), ABOVE, (s, i + 1), ABOVE, ("cap", s)))
            for k in range(1, w + 1):
                if k < i:
                    straight(s, k, k)
                elif k > i + 1:
                    straight(s, k, k - 2)
        elif piece.kind is SliceKind.CUP:
            edges.append(_Edge((s + 1, i), BELOW, (s + 1, i + 1), BELOW, ("cup", s)))
            for k in range(1, w + 1):
                straight(s, k, k if k < i else k + 2)
        else:
            crossing = diagram.crossing_at(s)
            state = 1 if crossing.number in alpha else 0
            if (state == 0) == crossing.over:
                edges.append(_Edge((s, i), ABOVE, (s + 1, i), BELOW, ("x", s, 0)))
                edges.append(_Edge((s, i + 1), ABOVE, (s + 1, i + 1), BELOW, ("x", s, 1)))
            else:
                edges.append(_Edge((s, i), ABOVE, (s, i + 1), ABOVE, ("x", s, 0)))
                edges.append(_Edge((s + 1, i), BELOW, (s + 1, i + 1), BELOW, ("x", s, 1)))
            for k in range(1, w + 1):
                if k not in (i, i + 1):
                    straight(s, k, k)
    return edges


@dataclass(frozen=True)
class BoundaryPoint:
    side: str
    position: int

    @property
    def name(self) -> str:
        return f"{self.side[0]}{self.position}"


@dataclass(frozen=True)
class Component:
    closed: bool
    nodes: tuple[Node, ...]
    pieces: tuple[Piece, ...]
    start: Optional[BoundaryPoint] = None
    end: Optional[BoundaryPoint] = None

    @property
    def kind(self) -> str:
        return "circle" if self.closed else "arc"

    @property
    def key(self) -> frozenset:
        return frozenset(self.nodes)


@dataclass(frozen=True)
class Resolution:
    alpha: frozenset[int]
    epsilon: int
    components: tuple[Component, ...]
    node_index: dict[Node, int]

    @property
    def type_word(self) -> tuple[int, ...]:
        """1 for arcs, 0 for circles, in canonical component order."""
        return tuple(0 if c.closed else 1 for c in self.components)

    @property
    def n_circles(self) -> int:
        return sum(1 for c in self.components if c.closed)

    @property
    def n_arcs(self) -> int:
        return sum(1 for c in self.components if not c.closed)

    def component_of(self, point: BoundaryPoint) -> int:
        for idx, c in enumerate(self.components):
            if point in (c.start, c.end):
                return idx
        raise KeyError(point)


def resolve(diagram: TangleDiagram, alpha: frozenset[int], epsilon: int) -> Resolution:
    """
    Smooth every crossing (0-smoothing unless its number is in alpha) and
    trace the resulting arcs and circles in the checkerboard orientation.

    Components are ordered by the smallest (level, position) node they pass
    through. Each component records its nodes and its pieces in travel order.
    """
    edges = _smoothing_edges(diagram, alpha)
    incident: dict[Node, list[int]] = defaultdict(list)
    for idx, e in enumerate(edges):
        incident[e.a].append(idx)
        incident[e.b].append(idx)
    top = diagram.height

    def trace(start: Node) -> tuple[bool, list[Node], list[Piece]]:
        nodes = [start]
        pieces: list[Piece] = [("in", start[1])] if start[0] == 0 else []
        node = start
        while True:
            outgoing = [i for i in incident[node] if edges[i].leaves(node, epsilon)]
            if not outgoing:
                return False, nodes, pieces
            edge = edges[outgoing[0]]
            if edge.piece is not None:
                pieces.append(edge.piece)
            node = edge.other(node)
            if node == start:
                return True, nodes, pieces
            nodes.append(node)
            if node[0] == 0:
                pieces.append(("in", node[1]))

    starts = []
    for k in range(1, diagram.p + 1):
        if points_up((0, k), epsilon):
            starts.append(((0, k), BoundaryPoint("bottom", k)))
    for k in range(1, diagram.q + 1):
        if not points_up((top, k), epsilon):
            starts.append(((top, k), BoundaryPoint("top", k)))

    found: list[Component] = []
    seen: set[Node] = set()
    for node, point in starts:
        closed, nodes, pieces = trace(node)
        last = nodes[-1]
        if last[0] == top and points_up(last, epsilon):
            end = BoundaryPoint("top", last[1])
        else:
            end = BoundaryPoint("bottom", last[1])
        found.append(Component(closed, tuple(nodes), tuple(pieces), point, end))
        seen.update(nodes)
    for node in diagram.nodes():
        if node in seen:
            continue
        closed, nodes, pieces = trace(node)
        if not closed:
            raise ComputationError(f"open strand through {node} has no boundary start")
        found.append(Component(True, tuple(nodes), tuple(pieces)))
        seen.update(nodes)

    found.sort(key=lambda c: min(c.nodes))
    node_index = {node: idx for idx, c in enumerate(found) for node in c.nodes}
    return Resolution(frozenset(alpha), epsilon, tuple(found), node_index)


# ============================================================================
# Saddles and the cube
# ============================================================================


@dataclass(frozen=True)
class SaddleDescriptor:
    """
    The saddle at one crossing between smoothings alpha and alpha + {j}.

    `source` and `target` list the touched components in the order the
    local map expects:

        ArcArc          (a1, a2) -> (b1, b2), b_k containing the start of a_k
        ArcToCircleArc  (a,)     -> (circle, arc)
        CircleArcToArc  (circle, arc) -> (a,)
        Merge_CC        (c1, c2) -> (c,)
        Split_CC        (c,)     -> (c1, c2)
    """
    crossing: int
    alpha: frozenset[int]
    kind: SaddleKind
    source: tuple[int, ...]
    target: tuple[int, ...]
    untouched: dict[int, int]
    variant: str


def saddle_classify(diagram: TangleDiagram, alpha: frozenset[int], j: int, epsilon: int,
                    source: Optional[Resolution] = None,
                    target: Optional[Resolution] = None) -> SaddleDescriptor:
    if j in alpha:
        raise MalformedInput(f"crossing {j} is already 1-smoothed in {sorted(alpha)}")
    crossing = diagram.crossings[j - 1]
    src = source or resolve(diagram, alpha, epsilon)
    tgt = target or resolve(diagram, alpha | {j}, epsilon)
    src_touched = sorted({src.node_index[p] for p in crossing.ports})
    tgt_touched = sorted({tgt.node_index[p] for p in crossing.ports})

    by_key = {c.key: idx for idx, c in enumerate(tgt.components)}
    untouched = {
        idx: by_key[c.key] for idx, c in enumerate(src.components) if idx not in src_touched
    }

    closed_src = [src.components[x].closed for x in src_touched]
    closed_tgt = [tgt.components[x].closed for x in tgt_touched]
    if len(src_touched) == 2 and len(tgt_touched) == 2 and not any(closed_src):
        a1, a2 = src_touched
        b1 = tgt.node_index[src.components[a1].nodes[0]]
        b2 = tgt.node_index[src.components[a2].nodes[0]]
        kind, src_order, tgt_order = SaddleKind.ARC_ARC, (a1, a2), (b1, b2)
    elif len(src_touched) == 1 and len(tgt_touched) == 2:
        if closed_src[0]:
            kind, src_order, tgt_order = SaddleKind.SPLIT, tuple(src_touched), tuple(tgt_touched)
        else:
            circle = tgt_touched[closed_tgt.index(True)]
            arc = tgt_touched[closed_tgt.index(False)]
            kind, src_order, tgt_order = SaddleKind.ARC_TO_CIRCLE_ARC, tuple(src_touched), (circle, arc)
    elif len(src_touched) == 2 and len(tgt_touched) == 1:
        if all(closed_src):
            kind, src_order, tgt_order = SaddleKind.MERGE, tuple(src_touched), tuple(tgt_touched)
        else:
            circle = src_touched[closed_src.index(True)]
            arc = src_touched[closed_src.index(False)]
            kind, src_order, tgt_order = SaddleKind.CIRCLE_ARC_TO_ARC, (circle, arc), tuple(tgt_touched)
    else:
        raise ComputationError(
            f"crossing {j} at {sorted(alpha)} touches {len(src_touched)} -> {len(tgt_touched)} components"
        )

    variant = "X" if gap_shaded(crossing.position - 1, epsilon) else "Y"
    return SaddleDescriptor(j, frozenset(alpha), kind, src_order, tgt_order, untouched, variant)


def vertex_order(n: int) -> list[frozenset[int]]:
    """All subsets of {1..n}, by size and then lexicographically."""
    out = []
    for size in range(n + 1):
        out.extend(frozenset(c) for c in combinations(range(1, n + 1), size))
    return out


@dataclass(frozen=True)
class TangleCube:
    diagram: TangleDiagram
    epsilon: int
    vertices: dict[frozenset[int], Resolution]
    edges: dict[tuple[frozenset[int], int], SaddleDescriptor]

    def shift(self, alpha: frozenset[int]) -> int:
        return 2 * len(alpha)


def build_cube(diagram: TangleDiagram, epsilon: int) -> TangleCube:
    if epsilon not in (1, -1):
        raise MalformedInput(f"epsilon must be +1 or -1, got {epsilon}")
    n = diagram.n
    logger.info("### Building cube for %d crossings ###", n)
    order = vertex_order(n)
    vertices = {alpha: resolve(diagram, alpha, epsilon) for alpha in order}
    edges = {}
    for alpha in order:
        for j in range(1, n + 1):
            if j not in alpha:
                edges[(alpha, j)] = saddle_classify(
                    diagram, alpha, j, epsilon, vertices[alpha], vertices[alpha | {j}]
                )
    logger.debug("cube has %d vertices and %d edges", len(vertices), len(edges))
    return TangleCube(diagram, epsilon, vertices, edges)
