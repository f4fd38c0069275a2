"""
Exact linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays paired with a `FieldSpec`. Over 𝔽_p the
entries are int64 residues in [0, p); over ℚ they are object arrays of
`fractions.Fraction`. Every routine returns freshly allocated arrays.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np
from sympy import isprime

from .errors import InputError

logger = logging.getLogger(__name__)

# Residues stay below 2**31 so products fit in int64.
MAX_CHARACTERISTIC = 2**31 - 1

Matrix = np.ndarray


class FieldError(InputError):
    """Raised when a characteristic is neither 0 nor a prime"""
    pass


class DimensionMismatch(InputError):
    """Raised when matrix or tensor shapes are incompatible"""
    pass


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = 2

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p < 2 or p > MAX_CHARACTERISTIC or not isprime(p)):
            raise FieldError(f"characteristic {p} is not 0 or a prime below 2^31")

    def __str__(self) -> str:
        return "QQ" if self.is_rational else f"GF({self.characteristic})"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def dtype(self):
        return object if self.is_rational else np.int64

    def as_dict(self) -> dict:
        return {"char": self.characteristic}

    # ------------------------------------------------------------------
    # Scalars
    # ------------------------------------------------------------------

    def element(self, value: Any) -> Any:
        """
        Coerce an int, Fraction or "n/d" string into the field.

        Raises:
            FieldError: If a denominator vanishes modulo the characteristic
        """
        if isinstance(value, str):
            value = Fraction(value)
        if self.is_rational:
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"{value} has no image in {self}")
            return (value.numerator * pow(value.denominator, -1, p)) % p
        return int(value) % p

    def inverse(self, value: Any) -> Any:
        value = self.element(value)
        if value == 0:
            raise ZeroDivisionError(f"0 is not invertible in {self}")
        if self.is_rational:
            return 1 / value
        return pow(int(value), -1, self.characteristic)

    def to_json(self, value: Any) -> Any:
        """Rationals serialise as "n/d" strings, residues as ints."""
        if self.is_rational:
            return str(Fraction(value))
        return int(value)

    # ------------------------------------------------------------------
    # Arrays
    # ------------------------------------------------------------------

    def array(self, values: Any) -> Matrix:
        raw = np.array(values, dtype=object)
        out = np.empty(raw.shape, dtype=self.dtype)
        for index in np.ndindex(raw.shape):
            out[index] = self.element(raw[index])
        return out

    def zeros(self, shape) -> Matrix:
        if self.is_rational:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> Matrix:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.element(1)
        return out

    def reduce(self, m: Matrix) -> Matrix:
        if self.is_rational:
            return m
        return np.mod(m, self.characteristic)

    def scale(self, m: Matrix, c: Any) -> Matrix:
        return self.reduce(m * self.element(c))

    def matmul(self, a: Matrix, b: Matrix) -> Matrix:
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if a.shape[-1] == 0 or a.size == 0 or b.size == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return self.reduce(a @ b)

    def chain(self, *ms: Matrix) -> Matrix:
        """Product m1 @ m2 @ ... evaluated right to left."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.matmul(m, out)
        return out

    def kron(self, a: Matrix, b: Matrix) -> Matrix:
        """Kronecker product; index (i, j) of the result is i * rows(b) + j."""
        if a.size == 0 or b.size == 0:
            return self.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
        out = np.multiply.outer(a, b).transpose(0, 2, 1, 3)
        return self.reduce(out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))

    def add(self, a: Matrix, b: Matrix) -> Matrix:
        return self.reduce(a + b)

    def sub(self, a: Matrix, b: Matrix) -> Matrix:
        return self.reduce(a - b)

    def neg(self, a: Matrix) -> Matrix:
        return self.reduce(-a)


def is_zero(m: Matrix) -> bool:
    if m.size == 0:
        return True
    return not bool(np.any(m != 0))


def first_nonzero(m: Matrix) -> Optional[tuple[int, ...]]:
    """Index of the first nonzero entry in C order, or None."""
    if m.size == 0:
        return None
    hits = np.argwhere(m != 0)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


# ============================================================================
# Gaussian elimination
# ============================================================================


def row_reduce(m: Matrix, field: FieldSpec,
               column_order: Optional[Sequence[int]] = None) -> tuple[Matrix, list[int]]:
    """
    Reduced row echelon form of `m` with columns visited in `column_order`.

    Args:
        m: Matrix over `field`
        field: The coefficient field
        column_order: Permutation of the column indices; defaults to 0..n-1

    Returns:
        The nonzero rows of the reduced form (columns permuted by
        `column_order`) and the pivot positions in permuted coordinates
    """
    a = np.array(m, dtype=field.dtype, copy=True)
    if column_order is not None:
        a = a[:, list(column_order)]
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        candidates = np.nonzero(a[r:, c] != 0)[0]
        if candidates.size == 0:
            continue
        pivot_row = r + int(candidates[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = field.reduce(a[r] * field.inverse(a[r, c]))
        column = a[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column != 0)[0]
        if targets.size:
            a[targets] = field.reduce(a[targets] - np.multiply.outer(column[targets], a[r]))
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Matrix, field: FieldSpec) -> int:
    if m.size == 0:
        return 0
    return len(row_reduce(m, field)[1])


def prefix_ranks(m: Matrix, field: FieldSpec, column_order: Sequence[int]) -> np.ndarray:
    """
    Ranks of every leading block of columns.

    Returns:
        Array `out` of length len(column_order) + 1 where out[j] is the rank
        of the columns column_order[:j]
    """
    n = len(column_order)
    out = np.zeros(n + 1, dtype=np.int64)
    if n == 0 or m.shape[0] == 0:
        return out
    _, pivots = row_reduce(m, field, column_order)
    marks = np.zeros(n, dtype=np.int64)
    marks[pivots] = 1
    out[1:] = np.cumsum(marks)
    return out


def kernel_basis(m: Matrix, field: FieldSpec) -> Matrix:
    """Columns of the result form a basis of {x : m x = 0}."""
    n_cols = m.shape[1]
    if m.shape[0] == 0:
        return field.eye(n_cols)
    reduced, pivots = row_reduce(m, field)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    out = field.zeros((n_cols, len(free)))
    for k, f in enumerate(free):
        out[f, k] = field.element(1)
        for row, p in enumerate(pivots):
            out[p, k] = field.reduce(-reduced[row, f])
    return out


def column_space_basis(m: Matrix, field: FieldSpec) -> tuple[Matrix, list[int]]:
    """
    Canonical basis of the column space: the rows of the reduced echelon
    form of m^T, returned as columns together with their pivot coordinates.
    """
    if m.size == 0:
        return field.zeros((m.shape[0], 0)), []
    reduced, pivots = row_reduce(m.T, field)
    return reduced.T.copy(), pivots


def image_membership_rank(span_a: Matrix, span_b: Matrix, field: FieldSpec) -> int:
    """dim(span(a) + span(b)) - dim(span(b)) for column spans."""
    if span_a.shape[1] == 0:
        return 0
    if span_b.shape[1] == 0:
        return rank(span_a, field)
    return rank(np.hstack([span_a, span_b]), field) - rank(span_b, field)


def independent_columns(span: Matrix, candidates: Matrix, field: FieldSpec) -> list[int]:
    """Indices of candidate columns that extend a basis of span(span), greedily in order."""
    base = span.shape[1]
    if candidates.shape[1] == 0:
        return []
    stacked = np.hstack([span, candidates]) if base else candidates
    _, pivots = row_reduce(stacked, field)
    return [p - base for p in pivots if p >= base]


def solve(m: Matrix, b: Matrix, field: FieldSpec) -> Optional[Matrix]:
    """
    One solution x of m x = b, or None when b is not in the column space.

    `b` may be a vector or a matrix of right-hand sides; a matrix is
    solvable only when every column is.
    """
    vector = b.ndim == 1
    rhs = b.reshape(-1, 1) if vector else b
    n = m.shape[1]
    if m.shape[0] != rhs.shape[0]:
        raise DimensionMismatch(f"cannot solve {m.shape} against {rhs.shape}")
    reduced, pivots = row_reduce(np.hstack([m, rhs]), field)
    if pivots and pivots[-1] >= n:
        return None
    x = field.zeros((n, rhs.shape[1]))
    for row, p in enumerate(pivots):
        x[p] = reduced[row, n:]
    return x[:, 0] if vector else x


def inverse(m: Matrix, field: FieldSpec) -> Matrix:
    """
    Raises:
        DimensionMismatch: If m is not square and invertible
    """
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatch(f"matrix of shape {m.shape} is not square")
    x = solve(m, field.eye(n), field)
    if x is None:
        raise DimensionMismatch("matrix is singular")
    return x


def permutation_matrix(mapping: Sequence[int], field: FieldSpec) -> Matrix:
    """Matrix sending basis vector j to basis vector mapping[j]."""
    n = len(mapping)
    out = field.zeros((n, n))
    for j, i in enumerate(mapping):
        out[i, j] = field.element(1)
    return out
