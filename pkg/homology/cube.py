"""
Realization of a tangle cube by a knowledgeable Frobenius algebra.

Every arc of a smoothing carries a copy of A' and every circle a copy of C,
where A' is A for ε = +1 and A^op for ε = -1. Writing Δ'(1) = Σ D[j,k] e_j ⊗ e_k,
the saddle maps are

    ArcArc          x ⊗ y ↦ Σ D[j,k] (x e_j) ⊗ (y e_k)
    ArcToCircleArc  x ↦ Σ D[j,k] ι*(x e_j) ⊗ e_k
    CircleArcToArc  z ⊗ x ↦ ι(z) x
    Merge_CC        μ_C
    Split_CC        Δ_C

and every other component is carried along by the identity.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    AlgebraNotKnowledgeable,
    FrobeniusData,
    KnowledgeableFrobenius,
    opposite,
)
from .linalg import FieldSpec, Matrix
from .tangle import Resolution, SaddleDescriptor, SaddleKind, TangleCube

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexSpace:
    factors: tuple[str, ...]
    dims: tuple[int, ...]
    degrees: np.ndarray

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1


@dataclass(frozen=True)
class RealizedCube:
    cube: TangleCube
    field: FieldSpec
    open_algebra: Optional[FrobeniusData]
    closed_algebra: FrobeniusData
    vertices: dict[frozenset[int], VertexSpace]
    edges: dict[tuple[frozenset[int], int], Matrix]


class LocalMaps:
    """Saddle maps of one (A', C) pair, computed once per realization."""

    def __init__(self, open_algebra: Optional[FrobeniusData], closed_algebra: FrobeniusData,
                 iota: Optional[Matrix], iota_star: Optional[Matrix]):
        self.A = open_algebra
        self.C = closed_algebra
        self.iota = iota
        self.iota_star = iota_star
        self.field = closed_algebra.field
        self._cache: dict[SaddleKind, Matrix] = {}

    def __getitem__(self, kind: SaddleKind) -> Matrix:
        if kind not in self._cache:
            self._cache[kind] = self._build(kind)
        return self._cache[kind]

    def _delta_one(self) -> Matrix:
        d = self.A.dim
        return self.field.matmul(self.A.comult, self.A.unit).reshape(d, d)

    def _build(self, kind: SaddleKind) -> Matrix:
        F = self.field
        if kind is SaddleKind.MERGE:
            return self.C.mult
        if kind is SaddleKind.SPLIT:
            return self.C.comult
        if self.A is None:
            raise AlgebraNotKnowledgeable(f"{kind.value} saddle needs an open algebra")
        d, c = self.A.dim, self.C.dim
        mu = self.A.mu
        if kind is SaddleKind.CIRCLE_ARC_TO_ARC:
            # ι(z) x: out[u, (z, x)]
            local = np.tensordot(self.iota, mu, axes=([0], [0]))
            return F.reduce(local.transpose(2, 0, 1).reshape(d, c * d))
        D1 = self._delta_one()
        if kind is SaddleKind.ARC_ARC:
            local = F.zeros((d, d, d, d))
            for j in range(d):
                for k in range(d):
                    if D1[j, k] != 0:
                        # mu[:, j, :] is x ↦ x e_j as (x, u)
                        term = np.multiply.outer(mu[:, j, :], mu[:, k, :])  # (x, u, y, v)
                        local = F.reduce(local + D1[j, k] * term.transpose(1, 3, 0, 2))
            return local.reshape(d * d, d * d)
        if kind is SaddleKind.ARC_TO_CIRCLE_ARC:
            local = F.zeros((c, d, d))
            for j in range(d):
                circle_part = F.matmul(self.iota_star, mu[:, j, :].T)  # (c, x)
                for k in range(d):
                    if D1[j, k] != 0:
                        local[:, k, :] = F.reduce(local[:, k, :] + D1[j, k] * circle_part)
            return local.reshape(c * d, d)
        raise ValueError(kind)


def _vertex_space(resolution: Resolution, A: Optional[FrobeniusData], C: FrobeniusData,
                  shift: int) -> VertexSpace:
    factors = tuple(c.kind for c in resolution.components)
    if "arc" in factors and A is None:
        raise AlgebraNotKnowledgeable("smoothing has arcs but only a closed algebra was given")
    dims = []
    degrees = np.zeros(1, dtype=np.int64)
    for kind in factors:
        algebra = C if kind == "circle" else A
        dims.append(algebra.dim)
        degrees = np.add.outer(degrees, np.array(algebra.degrees, dtype=np.int64)).reshape(-1)
    return VertexSpace(factors, tuple(dims), degrees + shift)


def tensor_index_map(dims: tuple[int, ...], axes: list[int]) -> np.ndarray:
    """
    For tensor factors listed in `axes` order, map each flat index of the
    permuted tensor to the flat index in the original factor order.
    """
    n = int(np.prod(dims, dtype=np.int64)) if dims else 1
    grid = np.arange(n).reshape(dims) if dims else np.arange(1).reshape(())
    return grid.transpose(axes).reshape(-1)


def edge_matrix(saddle: SaddleDescriptor, source: VertexSpace, target: VertexSpace,
                local: Matrix, field: FieldSpec) -> Matrix:
    """Embed the local saddle map into the full vertex spaces."""
    untouched_src = sorted(saddle.untouched)
    untouched_tgt = [saddle.untouched[x] for x in untouched_src]
    rest = int(np.prod([source.dims[x] for x in untouched_src], dtype=np.int64))
    full_local = field.kron(local, field.eye(rest))
    cols = tensor_index_map(source.dims, list(saddle.source) + untouched_src)
    rows = tensor_index_map(target.dims, list(saddle.target) + untouched_tgt)
    out = field.zeros((target.dim, source.dim))
    out[np.ix_(rows, cols)] = full_local
    return out


def realize_cube(cube: TangleCube, algebra: KnowledgeableFrobenius | FrobeniusData) -> RealizedCube:
    """
    Attach vector spaces to the smoothings of `cube` and linear maps to its
    saddles. A closed `FrobeniusData` is accepted for link diagrams.

    Raises:
        AlgebraNotKnowledgeable: If arcs occur and no open algebra is available
    """
    if isinstance(algebra, KnowledgeableFrobenius):
        A = algebra.A if cube.epsilon == 1 else opposite(algebra.A)
        C, iota, iota_star = algebra.C, algebra.iota, algebra.iota_star
    else:
        A, C, iota, iota_star = None, algebra, None, None
    logger.info("### Realizing cube of %d vertices over %s ###", len(cube.vertices), C.field)
    local = LocalMaps(A, C, iota, iota_star)
    vertices = {
        alpha: _vertex_space(res, A, C, cube.shift(alpha)) for alpha, res in cube.vertices.items()
    }
    edges = {}
    for (alpha, j), saddle in cube.edges.items():
        edges[(alpha, j)] = edge_matrix(saddle, vertices[alpha], vertices[alpha | {j}],
                                        local[saddle.kind], C.field)
    return RealizedCube(cube, C.field, A, C, vertices, edges)
