"""
Filtered cochain complexes and their bigraded homology.

C(T, ε, 𝔸)^r is the direct sum of the vertex spaces with |α| - n₋ = r,
internally shifted by 2n₊ - 4n₋. The differential on the summand of α is
(-1)^{n₋} Σ_j (-1)^{#{k ∈ α : k < j}} times the saddle map of (α, j).
"""

import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
import sympy as sp

from .algebra import AxiomReport, GradingMode
from .cube import RealizedCube
from .errors import ComputationError
from .linalg import (
    FieldSpec,
    Matrix,
    first_nonzero,
    independent_columns,
    kernel_basis,
    prefix_ranks,
    rank,
)
from .tangle import vertex_order

logger = logging.getLogger(__name__)

A, t = sp.symbols("A t")


class NonCommutingSquare(ComputationError):
    """Raised when two paths around a face of the cube give different maps"""
    pass


# ============================================================================
# Data types
# ============================================================================


@dataclass(frozen=True)
class GradedSpace:
    degrees: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    @property
    def dim(self) -> int:
        return len(self.degrees)


@dataclass(eq=False)
class FilteredChainComplex:
    field: FieldSpec
    terms: dict[int, GradedSpace]
    differentials: dict[int, Matrix]
    mode: GradingMode = GradingMode.FILTERED
    vertices: dict[int, list[frozenset[int]]] = dc_field(default_factory=dict)

    def degrees(self, r: int) -> np.ndarray:
        if r in self.terms:
            return self.terms[r].degrees
        return np.zeros(0, dtype=np.int64)

    def dim(self, r: int) -> int:
        return len(self.degrees(r))

    def differential(self, r: int) -> Matrix:
        """d^r: C^r → C^{r+1}, as a dim(r+1) x dim(r) matrix."""
        if r in self.differentials:
            return self.differentials[r]
        return self.field.zeros((self.dim(r + 1), self.dim(r)))

    @property
    def r_range(self) -> list[int]:
        return sorted(self.terms)

    def total_dim(self) -> int:
        return sum(self.dim(r) for r in self.terms)

    def degree_counts(self, r: int) -> Counter:
        return Counter(int(k) for k in self.degrees(r))


@dataclass(frozen=True)
class BigradedDims:
    """Ranks of H^{k,r} keyed by (k, r); zero entries are omitted."""
    ranks: dict[tuple[int, int], int]

    def rank(self, k: int, r: int) -> int:
        return self.ranks.get((k, r), 0)

    def total(self, r: int) -> int:
        return sum(v for (_, rr), v in self.ranks.items() if rr == r)

    def per_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (_, r), v in self.ranks.items():
            out[r] = out.get(r, 0) + v
        return out

    def rows(self) -> list[dict]:
        return [{"r": r, "k": k, "rank": v} for (k, r), v in sorted(self.ranks.items(),
                                                                      key=lambda kv: (kv[0][1], kv[0][0]))]


@dataclass(frozen=True)
class Polynomial2:
    """Σ rank(H^{k,r}) t^r A^k with integer coefficients."""
    coefficients: dict[tuple[int, int], int]

    def as_expr(self) -> sp.Expr:
        return sp.Add(*[c * t**r * A**k for (r, k), c in self.coefficients.items()])

    def canonical(self) -> str:
        """Terms `c*t^r*A^k` sorted by (r, k), joined by " + "; c omitted when 1."""
        terms = []
        for (r, k), c in sorted(self.coefficients.items()):
            if c == 0:
                continue
            factors = []
            if r != 0:
                factors.append(f"t^{r}")
            if k != 0:
                factors.append(f"A^{k}")
            if not factors:
                terms.append(str(c))
            elif c == 1:
                terms.append("*".join(factors))
            else:
                terms.append("*".join([str(c)] + factors))
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.canonical()


# ============================================================================
# Construction and checks
# ============================================================================


def _edge_sign(alpha: frozenset[int], j: int) -> int:
    return -1 if sum(1 for k in alpha if k < j) % 2 else 1


def check_commuting_squares(realized: RealizedCube) -> None:
    """
    Raises:
        NonCommutingSquare: If some face (α; j, l) fails to commute
    """
    F = realized.field
    n = realized.cube.diagram.n
    edges = realized.edges
    for alpha in vertex_order(n):
        free = [j for j in range(1, n + 1) if j not in alpha]
        for a, j in enumerate(free):
            for l in free[a + 1:]:
                one = F.matmul(edges[(alpha | {j}, l)], edges[(alpha, j)])
                two = F.matmul(edges[(alpha | {l}, j)], edges[(alpha, l)])
                if not np.array_equal(one, two):
                    raise NonCommutingSquare(f"face at {sorted(alpha)} with crossings {j}, {l}")


def total_complex(realized: RealizedCube, n_plus: Optional[int] = None,
                  n_minus: Optional[int] = None, check: bool = True) -> FilteredChainComplex:
    """
    Flatten a realized cube into a filtered cochain complex.

    Raises:
        NonCommutingSquare: If `check` is set and a face of the cube fails to commute
    """
    diagram = realized.cube.diagram
    n_plus = diagram.n_plus if n_plus is None else n_plus
    n_minus = diagram.n_minus if n_minus is None else n_minus
    if check:
        check_commuting_squares(realized)
    F = realized.field
    n = diagram.n
    internal_shift = 2 * n_plus - 4 * n_minus
    global_sign = -1 if n_minus % 2 else 1

    by_degree: dict[int, list[frozenset[int]]] = {}
    for alpha in vertex_order(n):
        by_degree.setdefault(len(alpha) - n_minus, []).append(alpha)

    offsets: dict[frozenset[int], int] = {}
    terms = {}
    for r, alphas in by_degree.items():
        position = 0
        parts = []
        for alpha in alphas:
            offsets[alpha] = position
            position += realized.vertices[alpha].dim
            parts.append(realized.vertices[alpha].degrees + internal_shift)
        terms[r] = GradedSpace(np.concatenate(parts))

    differentials = {}
    for r, alphas in by_degree.items():
        if r + 1 not in terms:
            continue
        d = F.zeros((terms[r + 1].dim, terms[r].dim))
        for alpha in alphas:
            col = offsets[alpha]
            width = realized.vertices[alpha].dim
            for j in range(1, n + 1):
                if j in alpha:
                    continue
                beta = alpha | {j}
                row = offsets[beta]
                height = realized.vertices[beta].dim
                block = realized.edges[(alpha, j)]
                if global_sign * _edge_sign(alpha, j) < 0:
                    block = F.neg(block)
                d[row:row + height, col:col + width] = F.add(d[row:row + height, col:col + width], block)
        differentials[r] = d

    mode = GradingMode.GRADED
    if realized.closed_algebra.grading_mode is not GradingMode.GRADED:
        mode = realized.closed_algebra.grading_mode
    if realized.open_algebra is not None and realized.open_algebra.grading_mode is GradingMode.FILTERED:
        mode = GradingMode.FILTERED
    return FilteredChainComplex(F, terms, differentials, mode, by_degree)


def verify_complex(c: FilteredChainComplex) -> AxiomReport:
    """d∘d = 0 in every degree, and d respects the grading or filtration."""
    F = c.field
    report = AxiomReport()
    for r in c.r_range:
        dd = F.matmul(c.differential(r + 1), c.differential(r))
        hit = first_nonzero(dd)
        report.record_index(f"d_squared[{r}]", None if hit is None else (r,) + hit)
        if c.mode is GradingMode.NONE:
            continue
        d = c.differential(r)
        if d.size == 0:
            continue
        out = c.degrees(r + 1).reshape(-1, 1)
        inn = c.degrees(r).reshape(1, -1)
        bad = (out != inn) if c.mode is GradingMode.GRADED else (out < inn)
        hits = np.argwhere((d != 0) & bad)
        index = None if len(hits) == 0 else (r,) + tuple(int(x) for x in hits[0])
        report.record_index(f"filtration[{r}]", index)
    return report


# ============================================================================
# Homology
# ============================================================================


def _filtered_homology_dims(c: FilteredChainComplex, r: int) -> dict[int, int]:
    """dim F^k H^r at each degree level k occurring in C^r."""
    F = c.field
    degrees = c.degrees(r)
    if len(degrees) == 0:
        return {}
    levels = sorted(set(int(k) for k in degrees))
    d = c.differential(r)
    e = c.differential(r - 1)

    descending = list(np.argsort(-degrees, kind="stable"))
    cycle_ranks = prefix_ranks(d, F, descending)
    ascending = list(np.argsort(degrees, kind="stable"))
    boundary_ranks = prefix_ranks(e.T, F, ascending)
    boundaries = int(boundary_ranks[-1])

    out = {}
    for k in levels:
        in_filtration = int(np.sum(degrees >= k))
        below = int(np.sum(degrees < k))
        cycles = in_filtration - int(cycle_ranks[in_filtration])
        filtered_boundaries = boundaries - int(boundary_ranks[below])
        out[k] = cycles - filtered_boundaries
    return out


def homology_bigraded(c: FilteredChainComplex) -> BigradedDims:
    """
    Ranks of gr^k H^r = F^k H^r / F^{k+1} H^r, where F^k collects the basis
    vectors of internal degree at least k. For graded complexes these are
    the ranks of the degree-k homology.
    """
    logger.info("### Computing homology of a complex of total dimension %d ###", c.total_dim())
    ranks = {}
    for r in c.r_range:
        filtered = _filtered_homology_dims(c, r)
        levels = sorted(filtered)
        for idx, k in enumerate(levels):
            above = filtered[levels[idx + 1]] if idx + 1 < len(levels) else 0
            value = filtered[k] - above
            if value:
                ranks[(k, r)] = value
    return BigradedDims(ranks)


def homology_ranks(c: FilteredChainComplex) -> dict[int, int]:
    """Ungraded ranks of H^r."""
    F = c.field
    out = {}
    for r in c.r_range:
        value = c.dim(r) - rank(c.differential(r), F) - rank(c.differential(r - 1), F)
        if value:
            out[r] = value
    return out


def homology_generators(c: FilteredChainComplex, r: int) -> Matrix:
    """Columns are cycles of C^r whose classes form a basis of H^r."""
    F = c.field
    cycles = kernel_basis(c.differential(r), F)
    boundaries = c.differential(r - 1)
    chosen = independent_columns(boundaries, cycles, F)
    return cycles[:, chosen]


def poincare_polynomial(dims: BigradedDims) -> Polynomial2:
    return Polynomial2({(r, k): v for (k, r), v in dims.ranks.items()})


def graded_euler_characteristic(c: FilteredChainComplex) -> sp.Expr:
    """Σ_r (-1)^r Σ_k dim(C^{k,r}) A^k as a Laurent polynomial in A."""
    total = sp.Integer(0)
    for r in c.r_range:
        sign = -1 if r % 2 else 1
        for k, count in c.degree_counts(r).items():
            total += sign * count * A**k
    return sp.expand(total)


def format_laurent(expr: sp.Expr) -> str:
    """Canonical text of a Laurent polynomial in A, by increasing exponent."""
    expr = sp.expand(expr)
    if expr == 0:
        return "0"
    terms = []
    shift = _lowest(expr)
    poly = sp.Poly(sp.expand(expr * A**shift), A)
    for (power,), c in sorted(poly.terms(), key=lambda kv: kv[0][0]):
        k = power - shift
        c = int(c)
        if k == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(f"A^{k}")
        else:
            terms.append(f"{c}*A^{k}")
    return " + ".join(terms)


def _lowest(expr: sp.Expr) -> int:
    """Smallest nonnegative shift making expr a polynomial in A."""
    exponents = [term.as_coeff_exponent(A)[1] for term in sp.Add.make_args(expr)]
    low = min(int(e) for e in exponents)
    return -low if low < 0 else 0


def result_document(c: FilteredChainComplex, dims: BigradedDims, algebra_name: str,
                    epsilon: int, n_plus: int, n_minus: int) -> dict:
    return {
        "field": c.field.as_dict(),
        "algebra": algebra_name,
        "epsilon": epsilon,
        "n_plus": n_plus,
        "n_minus": n_minus,
        "homology": dims.rows(),
        "polynomial": poincare_polynomial(dims).canonical(),
    }
