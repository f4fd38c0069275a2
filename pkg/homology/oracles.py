"""
Independent references for link diagrams.

Both routines trace smoothings with their own union-find over the nodes of
the slice grid and never call the saddle classifier, so they can be used to
cross-check the main pipeline.
"""

import logging
from itertools import product

import numpy as np
import sympy as sp

from .algebra import FrobeniusData
from .complex import A, BigradedDims, FilteredChainComplex, GradedSpace, homology_bigraded
from .errors import InputError
from .tangle import Node, SliceKind, TangleDiagram

logger = logging.getLogger(__name__)


class NotALink(InputError):
    """Raised when a link invariant is requested for a tangle with boundary"""
    pass


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[frozenset]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return sorted((frozenset(g) for g in out.values()), key=min)


def _require_link(diagram: TangleDiagram) -> None:
    if not diagram.is_link:
        raise NotALink(f"diagram has {diagram.p} bottom and {diagram.q} top endpoints")


def loops(diagram: TangleDiagram, alpha: frozenset[int]) -> list[frozenset[Node]]:
    """Node sets of the circles of the smoothing alpha, sorted by smallest node."""
    uf = UnionFind(diagram.nodes())
    for s, piece in enumerate(diagram.word.slices):
        i = piece.position
        carried = {}
        if piece.kind is SliceKind.CAP:
            uf.union((s, i), (s, i + 1))
            carried = {k: (k if k < i else k - 2) for k in range(1, diagram.width(s) + 1)
                       if k not in (i, i + 1)}
        elif piece.kind is SliceKind.CUP:
            uf.union((s + 1, i), (s + 1, i + 1))
            carried = {k: (k if k < i else k + 2) for k in range(1, diagram.width(s) + 1)}
        else:
            crossing = diagram.crossing_at(s)
            # the 0-smoothing of an over crossing runs vertically
            if (crossing.number in alpha) != crossing.over:
                uf.union((s, i), (s + 1, i))
                uf.union((s, i + 1), (s + 1, i + 1))
            else:
                uf.union((s, i), (s, i + 1))
                uf.union((s + 1, i), (s + 1, i + 1))
            carried = {k: k for k in range(1, diagram.width(s) + 1) if k not in (i, i + 1)}
        for below, above in carried.items():
            uf.union((s, below), (s + 1, above))
    return uf.groups()


def _states(n: int) -> list[frozenset[int]]:
    return [frozenset(j + 1 for j in range(n) if mask >> j & 1) for mask in range(2 ** n)]


def kauffman_bracket(diagram: TangleDiagram) -> sp.Expr:
    """
    Σ over smoothings of (-q)^{#1-smoothings} (q + q⁻¹)^{#circles}, q = A².

    Raises:
        NotALink: If the diagram has endpoints
    """
    _require_link(diagram)
    q = A**2
    total = sp.Integer(0)
    for alpha in _states(diagram.n):
        total += (-q) ** len(alpha) * (q + 1 / q) ** len(loops(diagram, alpha))
    return sp.expand(total)


def normalized_bracket(diagram: TangleDiagram) -> sp.Expr:
    """(-1)^{n₋} A^{2n₊ - 4n₋} ⟨L⟩, the graded Euler characteristic of the link complex."""
    sign = -1 if diagram.n_minus % 2 else 1
    return sp.expand(sign * A ** (2 * diagram.n_plus - 4 * diagram.n_minus) * kauffman_bracket(diagram))


def khovanov_link_oracle(diagram: TangleDiagram, closed: FrobeniusData) -> BigradedDims:
    """
    Bigraded homology of the closed TQFT cube of a link diagram, built from
    μ_C and Δ_C alone.

    Raises:
        NotALink: If the diagram has endpoints
    """
    _require_link(diagram)
    F = closed.field
    n = diagram.n
    d = closed.dim
    logger.info("### Oracle cube for %d crossings ###", n)
    states = sorted(_states(n), key=lambda s: (len(s), sum(1 << (j - 1) for j in s)))
    circles = {alpha: loops(diagram, alpha) for alpha in states}
    bases = {alpha: list(product(range(d), repeat=len(circles[alpha]))) for alpha in states}

    shift = 2 * diagram.n_plus - 4 * diagram.n_minus
    by_degree: dict[int, list[frozenset[int]]] = {}
    for alpha in states:
        by_degree.setdefault(len(alpha) - diagram.n_minus, []).append(alpha)

    offsets = {}
    terms = {}
    for r, alphas in by_degree.items():
        degrees = []
        for alpha in alphas:
            offsets[alpha] = len(degrees)
            for labels in bases[alpha]:
                degrees.append(sum(closed.degrees[x] for x in labels) + 2 * len(alpha) + shift)
        terms[r] = GradedSpace(np.array(degrees, dtype=np.int64))

    differentials = {}
    for r, alphas in by_degree.items():
        if r + 1 not in terms:
            continue
        matrix = F.zeros((terms[r + 1].dim, terms[r].dim))
        for alpha in alphas:
            for j in range(1, n + 1):
                if j in alpha:
                    continue
                _saddle(matrix, closed, circles[alpha], circles[alpha | {j}],
                        bases[alpha], offsets[alpha], offsets[alpha | {j}],
                        _sign(alpha, j, diagram.n_minus))
        differentials[r] = F.reduce(matrix)

    c = FilteredChainComplex(F, terms, differentials, closed.grading_mode, by_degree)
    return homology_bigraded(c)


def _sign(alpha: frozenset[int], j: int, n_minus: int) -> int:
    exponent = n_minus + sum(1 for k in alpha if k < j)
    return -1 if exponent % 2 else 1


def _saddle(matrix, closed: FrobeniusData, source: list[frozenset], target: list[frozenset],
            basis: list[tuple[int, ...]], col0: int, row0: int, sign: int) -> None:
    """Add sign times the merge or split from `source` circles to `target` circles."""
    d = closed.dim
    kept = {idx: target.index(c) for idx, c in enumerate(source) if c in target}
    old = [idx for idx in range(len(source)) if idx not in kept]
    new = [idx for idx in range(len(target)) if idx not in kept.values()]
    weights = [d ** (len(target) - 1 - pos) for pos in range(len(target))]

    for col, labels in enumerate(basis):
        row = sum(weights[kept[idx]] * labels[idx] for idx in kept)
        if len(old) == 2:
            outputs = [((k,), closed.mu[labels[old[0]], labels[old[1]], k]) for k in range(d)]
        else:
            outputs = [((x, y), closed.delta[labels[old[0]], x, y])
                       for x in range(d) for y in range(d)]
        for values, coefficient in outputs:
            if coefficient == 0:
                continue
            at = row + sum(weights[pos] * v for pos, v in zip(new, values))
            matrix[row0 + at, col0 + col] += sign * coefficient
