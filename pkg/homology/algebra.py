"""
Frobenius algebras and knowledgeable Frobenius pairs.

A `FrobeniusData` stores structure constants with the conventions

    mu[i, j, k]    = coefficient of e_k in e_i * e_j
    delta[i, j, k] = coefficient of e_j ⊗ e_k in Δ(e_i)

and exposes the same maps as matrices (`mult`, `comult`, `unit`,
`counit`) acting on flattened tensor powers, where e_i ⊗ e_j sits at index
i * dim + j. A `KnowledgeableFrobenius` couples an open algebra A with a
closed commutative algebra C through ι: C → A and ι*: A → C.
"""

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any, Optional

import numpy as np

from .errors import ComputationError, InputError
from .linalg import (
    DimensionMismatch,
    FieldSpec,
    Matrix,
    column_space_basis,
    first_nonzero,
    inverse,
    rank,
    solve,
)

logger = logging.getLogger(__name__)

JSON_VERSION = 1


class GradingMode(Enum):
    GRADED = "graded"
    FILTERED = "filtered"
    NONE = "none"


# Euler degrees of the structure maps; the closed maps carry twice the weight.
EULER_DEGREES = {
    "mu_A": -1,
    "eta_A": 1,
    "delta_A": -1,
    "eps_A": 1,
    "mu_C": -2,
    "eta_C": 2,
    "delta_C": -2,
    "eps_C": 2,
    "iota": -1,
    "iota_star": -1,
}


class GradingAbsent(InputError):
    """Raised when a degree check is requested for an ungraded algebra"""
    pass


class IncompatibleCharacteristic(InputError):
    """Raised when an algebra is requested over a field it does not live over"""
    pass


class AlgebraFormatError(InputError):
    """Raised when an algebra document cannot be read"""
    pass


class NotStronglySeparable(ComputationError):
    """Raised when the window element of a Frobenius algebra is not invertible"""
    pass


class AlgebraNotKnowledgeable(ComputationError):
    """Raised when open boundary data is needed but only a closed algebra is available"""
    pass


class SeparabilityMismatch(ComputationError):
    """Raised when the canonical form and the window element disagree on separability"""
    pass


# ============================================================================
# Data types
# ============================================================================


@dataclass(frozen=True, eq=False)
class FrobeniusData:
    field: FieldSpec
    basis: tuple[str, ...]
    mu: Matrix
    eta: Matrix
    delta: Matrix
    eps: Matrix
    degrees: tuple[int, ...]
    grading_mode: GradingMode = GradingMode.NONE
    closed: bool = False

    def __post_init__(self):
        d = len(self.basis)
        expected = {"mu": (d, d, d), "eta": (d,), "delta": (d, d, d), "eps": (d,)}
        for name, shape in expected.items():
            array = getattr(self, name)
            if array.shape != shape:
                raise DimensionMismatch(f"{name} has shape {array.shape}, expected {shape}")
            array.flags.writeable = False
        if len(self.degrees) != d:
            raise DimensionMismatch(f"{len(self.degrees)} degrees for {d} basis vectors")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def euler_scale(self) -> int:
        return 2 if self.closed else 1

    @property
    def mult(self) -> Matrix:
        d = self.dim
        return self.mu.transpose(2, 0, 1).reshape(d, d * d)

    @property
    def comult(self) -> Matrix:
        d = self.dim
        return self.delta.transpose(1, 2, 0).reshape(d * d, d)

    @property
    def unit(self) -> Matrix:
        return self.eta.reshape(self.dim, 1)

    @property
    def counit(self) -> Matrix:
        return self.eps.reshape(1, self.dim)

    def basis_vector(self, i: int) -> Matrix:
        v = self.field.zeros(self.dim)
        v[i] = self.field.element(1)
        return v

    def left_mult(self, v: Matrix) -> Matrix:
        """Matrix of x ↦ v * x."""
        return self.field.reduce(np.tensordot(v, self.mu, axes=(0, 0)).T)

    def right_mult(self, v: Matrix) -> Matrix:
        """Matrix of x ↦ x * v."""
        return self.field.reduce(np.tensordot(self.mu, v, axes=(1, 0)).T)

    def product(self, x: Matrix, y: Matrix) -> Matrix:
        xy = np.tensordot(np.tensordot(x, self.mu, axes=(0, 0)), y, axes=(0, 0))
        return self.field.reduce(xy)

    def tensor_degrees(self, n: int) -> np.ndarray:
        out = np.zeros(1, dtype=np.int64)
        single = np.array(self.degrees, dtype=np.int64)
        for _ in range(n):
            out = np.add.outer(out, single).reshape(-1)
        return out

    def describe(self, v: Matrix) -> str:
        """Human-readable linear combination, e.g. "2*y + 1"."""
        terms = []
        for i in reversed(range(self.dim)):
            c = v[i]
            if c == 0:
                continue
            label = self.basis[i]
            terms.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(terms) if terms else "0"

    def as_dict(self) -> dict:
        to_json = np.frompyfunc(self.field.to_json, 1, 1)
        return {
            "dim": self.dim,
            "basis": list(self.basis),
            "mu": to_json(self.mu).tolist(),
            "eta": to_json(self.eta).tolist(),
            "delta": to_json(self.delta).tolist(),
            "eps": to_json(self.eps).tolist(),
            "degrees": list(self.degrees),
            "grading_mode": self.grading_mode.value,
            "closed": self.closed,
            "field": self.field.as_dict(),
        }

    def same_structure(self, other: "FrobeniusData") -> bool:
        return (
            self.field == other.field
            and self.dim == other.dim
            and all(
                np.array_equal(getattr(self, name), getattr(other, name))
                for name in ("mu", "eta", "delta", "eps")
            )
        )


@dataclass(frozen=True, eq=False)
class KnowledgeableFrobenius:
    A: FrobeniusData
    C: FrobeniusData
    iota: Matrix  # dim(A) x dim(C)
    iota_star: Matrix  # dim(C) x dim(A)
    name: str = ""

    def __post_init__(self):
        if self.A.field != self.C.field:
            raise IncompatibleCharacteristic(
                f"open algebra over {self.A.field} but closed algebra over {self.C.field}"
            )
        if self.iota.shape != (self.A.dim, self.C.dim):
            raise DimensionMismatch(f"iota has shape {self.iota.shape}")
        if self.iota_star.shape != (self.C.dim, self.A.dim):
            raise DimensionMismatch(f"iota_star has shape {self.iota_star.shape}")
        self.iota.flags.writeable = False
        self.iota_star.flags.writeable = False

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    def as_dict(self) -> dict:
        to_json = np.frompyfunc(self.field.to_json, 1, 1)
        return {
            "name": self.name,
            "A": self.A.as_dict(),
            "C": self.C.as_dict(),
            "iota": to_json(self.iota).tolist(),
            "iota_star": to_json(self.iota_star).tolist(),
        }


@dataclass
class AxiomReport:
    checks: dict[str, bool] = dc_field(default_factory=dict)
    failures: dict[str, tuple[int, ...]] = dc_field(default_factory=dict)
    flags: dict[str, bool] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, difference: Matrix,
               out_shape: tuple[int, ...] = (), in_shape: tuple[int, ...] = ()) -> bool:
        """Record a check that passes iff `difference` vanishes."""
        hit = first_nonzero(difference)
        self.checks[name] = hit is None
        if hit is not None:
            row, col = hit[0], hit[-1]
            index = ()
            index += tuple(int(x) for x in np.unravel_index(row, out_shape)) if out_shape else (row,)
            index += tuple(int(x) for x in np.unravel_index(col, in_shape)) if in_shape else (col,)
            self.failures[name] = index
        return hit is None

    def record_index(self, name: str, index: Optional[tuple[int, ...]]) -> bool:
        self.checks[name] = index is None
        if index is not None:
            self.failures[name] = index
        return index is None

    def merge(self, prefix: str, other: "AxiomReport") -> None:
        for name, value in other.checks.items():
            self.checks[f"{prefix}.{name}"] = value
        for name, index in other.failures.items():
            self.failures[f"{prefix}.{name}"] = index
        for name, value in other.flags.items():
            self.flags[f"{prefix}.{name}"] = value

    def summary_lines(self) -> list[str]:
        lines = []
        for name, passed in self.checks.items():
            if passed:
                lines.append(f"{name}: ok")
            else:
                lines.append(f"{name}: FAILED at {self.failures[name]}")
        for name, value in self.flags.items():
            lines.append(f"{name}: {'yes' if value else 'no'}")
        return lines


# ============================================================================
# Helpers
# ============================================================================


def swap_matrix(dv: int, dw: int, field: FieldSpec) -> Matrix:
    """τ: V ⊗ W → W ⊗ V."""
    out = field.zeros((dw * dv, dv * dw))
    for i in range(dv):
        for j in range(dw):
            out[j * dv + i, i * dw + j] = field.element(1)
    return out


def _mu_tensor(m: Matrix, d: int) -> Matrix:
    return np.ascontiguousarray(m.reshape(d, d, d).transpose(1, 2, 0))


def _delta_tensor(m: Matrix, d: int) -> Matrix:
    return np.ascontiguousarray(m.reshape(d, d, d).transpose(2, 0, 1))


def _degree_violation(matrix: Matrix, out_degrees, in_degrees, shift: int,
                      mode: GradingMode) -> Optional[tuple[int, ...]]:
    if mode is GradingMode.NONE or matrix.size == 0:
        return None
    out = np.asarray(out_degrees, dtype=np.int64).reshape(-1, 1)
    target = np.asarray(in_degrees, dtype=np.int64).reshape(1, -1) + shift
    bad = (out != target) if mode is GradingMode.GRADED else (out < target)
    hits = np.argwhere((matrix != 0) & bad)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


def _truncate(matrix: Matrix, out_degrees, in_degrees, shift: int) -> Matrix:
    """Keep only the entries of exact degree `shift`."""
    out = np.asarray(out_degrees, dtype=np.int64).reshape(-1, 1)
    target = np.asarray(in_degrees, dtype=np.int64).reshape(1, -1) + shift
    result = matrix.copy()
    result[np.broadcast_to(out != target, matrix.shape)] = 0
    return result


def _structure_maps(f: FrobeniusData) -> dict[str, tuple[Matrix, np.ndarray, np.ndarray, int]]:
    """(matrix, out degrees, in degrees, Euler degree) of μ, η, Δ, ε."""
    deg = np.array(f.degrees, dtype=np.int64)
    pair = f.tensor_degrees(2)
    scalar = np.zeros(1, dtype=np.int64)
    s = f.euler_scale
    return {
        "mu": (f.mult, deg, pair, -s),
        "eta": (f.unit, deg, scalar, s),
        "delta": (f.comult, pair, deg, -s),
        "eps": (f.counit, scalar, deg, s),
    }


def is_commutative(f: FrobeniusData) -> bool:
    F = f.field
    return bool(np.array_equal(F.matmul(f.mult, swap_matrix(f.dim, f.dim, F)), f.mult))


def is_symmetric(f: FrobeniusData) -> bool:
    F = f.field
    form = F.matmul(f.counit, f.mult)
    return bool(np.array_equal(F.matmul(form, swap_matrix(f.dim, f.dim, F)), form))


# ============================================================================
# Construction
# ============================================================================


def frobenius_from_counit(field: FieldSpec, basis, mu, eta, eps, degrees=None,
                          grading_mode: GradingMode = GradingMode.NONE,
                          closed: bool = False) -> FrobeniusData:
    """
    Build a Frobenius algebra from its multiplication, unit and counit.

    The comultiplication is Δ(x) = Σ x e_a ⊗ e^a, where e^a is the basis
    dual to e_a under the pairing ε(x y).

    Raises:
        DimensionMismatch: If the pairing ε∘μ is degenerate
    """
    mu = field.array(mu)
    eta = field.array(eta)
    eps = field.array(eps)
    gram = field.reduce(np.tensordot(mu, eps, axes=(2, 0)))
    try:
        dual = inverse(gram, field)
    except DimensionMismatch as e:
        raise DimensionMismatch("the pairing ε∘μ is degenerate") from e
    delta = field.reduce(np.tensordot(mu, dual, axes=([1], [1])))
    degrees = tuple(degrees) if degrees is not None else (0,) * len(basis)
    return FrobeniusData(field, tuple(basis), mu, eta, delta, eps, degrees, grading_mode, closed)


def opposite(f: FrobeniusData) -> FrobeniusData:
    """A^op: μ∘τ and τ∘Δ."""
    return FrobeniusData(
        f.field,
        f.basis,
        np.ascontiguousarray(f.mu.transpose(1, 0, 2)),
        f.eta.copy(),
        np.ascontiguousarray(f.delta.transpose(0, 2, 1)),
        f.eps.copy(),
        f.degrees,
        f.grading_mode,
        f.closed,
    )


def opposite_pair(k: KnowledgeableFrobenius) -> KnowledgeableFrobenius:
    return KnowledgeableFrobenius(opposite(k.A), k.C, k.iota.copy(), k.iota_star.copy(), k.name)


def direct_sum(f: FrobeniusData, g: FrobeniusData) -> FrobeniusData:
    if f.field != g.field:
        raise IncompatibleCharacteristic(f"cannot add algebras over {f.field} and {g.field}")
    F = f.field
    m, n = f.dim, g.dim
    d = m + n
    mu = F.zeros((d, d, d))
    delta = F.zeros((d, d, d))
    mu[:m, :m, :m] = f.mu
    mu[m:, m:, m:] = g.mu
    delta[:m, :m, :m] = f.delta
    delta[m:, m:, m:] = g.delta
    eta = np.concatenate([f.eta, g.eta])
    eps = np.concatenate([f.eps, g.eps])
    return FrobeniusData(F, f.basis + g.basis, mu, eta, delta, eps, f.degrees + g.degrees,
                         GradingMode.NONE, f.closed and g.closed)


def change_of_basis(f: FrobeniusData, P: Matrix, basis, degrees,
                    grading_mode: GradingMode) -> FrobeniusData:
    """
    Re-express `f` in the basis whose vectors are the columns of `P`.

    Raises:
        DimensionMismatch: If P is not invertible
    """
    F = f.field
    d = f.dim
    P = F.array(P)
    P_inv = inverse(P, F)
    mult = F.chain(P_inv, f.mult, F.kron(P, P))
    comult = F.chain(F.kron(P_inv, P_inv), f.comult, P)
    eta = F.matmul(P_inv, f.unit).reshape(d)
    eps = F.matmul(f.counit, P).reshape(d)
    return FrobeniusData(F, tuple(basis), _mu_tensor(mult, d), eta, _delta_tensor(comult, d),
                         eps, tuple(degrees), grading_mode, f.closed)


# ============================================================================
# Axioms
# ============================================================================


def validate_frobenius(f: FrobeniusData) -> AxiomReport:
    """
    Check the Frobenius axioms of `f` and, when it carries a grading or
    filtration, the Euler degrees of its structure maps.

    Open algebras must be symmetric and closed algebras commutative; the
    other property is reported as a flag only.
    """
    F = f.field
    d = f.dim
    I = F.eye(d)
    M, D, u, e = f.mult, f.comult, f.unit, f.counit
    tau = swap_matrix(d, d, F)
    report = AxiomReport()

    report.record("associativity",
                  F.sub(F.matmul(M, F.kron(M, I)), F.matmul(M, F.kron(I, M))), (d,), (d, d, d))
    report.record("unit_left", F.sub(F.matmul(M, F.kron(u, I)), I), (d,), (d,))
    report.record("unit_right", F.sub(F.matmul(M, F.kron(I, u)), I), (d,), (d,))
    report.record("coassociativity",
                  F.sub(F.matmul(F.kron(D, I), D), F.matmul(F.kron(I, D), D)), (d, d, d), (d,))
    report.record("counit_left", F.sub(F.matmul(F.kron(e, I), D), I), (d,), (d,))
    report.record("counit_right", F.sub(F.matmul(F.kron(I, e), D), I), (d,), (d,))
    DM = F.matmul(D, M)
    report.record("frobenius_left",
                  F.sub(F.matmul(F.kron(I, M), F.kron(D, I)), DM), (d, d), (d, d))
    report.record("frobenius_right",
                  F.sub(F.matmul(F.kron(M, I), F.kron(I, D)), DM), (d, d), (d, d))

    commutative = F.sub(F.matmul(M, tau), M)
    form = F.matmul(e, M)
    symmetric = F.sub(F.matmul(form, tau), form)
    if f.closed:
        report.record("commutative", commutative, (d,), (d, d))
        report.flags["symmetric"] = is_symmetric(f)
    else:
        report.record("symmetric", symmetric, (1,), (d, d))
        report.flags["commutative"] = is_commutative(f)

    for name, (matrix, out_deg, in_deg, shift) in _structure_maps(f).items():
        if f.grading_mode is not GradingMode.NONE:
            report.record_index(f"degree_{name}",
                                _degree_violation(matrix, out_deg, in_deg, shift, f.grading_mode))
    return report


def validate_knowledgeable(k: KnowledgeableFrobenius) -> AxiomReport:
    """Component axioms plus the unit, multiplicativity, knowledge, duality and Cardy conditions."""
    A, C = k.A, k.C
    F = k.field
    dA, dC = A.dim, C.dim
    IA, IC = F.eye(dA), F.eye(dC)
    report = AxiomReport()
    report.merge("A", validate_frobenius(A))
    report.merge("C", validate_frobenius(C))

    report.record("iota_unit", F.sub(F.matmul(k.iota, C.unit), A.unit), (dA,), (1,))
    report.record("iota_multiplicative",
                  F.sub(F.matmul(k.iota, C.mult), F.matmul(A.mult, F.kron(k.iota, k.iota))),
                  (dA,), (dC, dC))
    iota_left = F.kron(k.iota, IA)
    report.record("knowledge",
                  F.sub(F.matmul(A.mult, iota_left),
                        F.chain(A.mult, swap_matrix(dA, dA, F), iota_left)),
                  (dA,), (dC, dA))
    report.record("duality",
                  F.sub(F.chain(C.counit, C.mult, F.kron(IC, k.iota_star)),
                        F.chain(A.counit, A.mult, iota_left)),
                  (1,), (dC, dA))
    report.record("cardy",
                  F.sub(F.chain(A.mult, swap_matrix(dA, dA, F), A.comult),
                        F.matmul(k.iota, k.iota_star)),
                  (dA,), (dA,))

    if A.grading_mode is not GradingMode.NONE and C.grading_mode is not GradingMode.NONE:
        report.merge("euler", check_euler_degrees(k))
    return report


def cardy_lhs(k: KnowledgeableFrobenius) -> Matrix:
    """Matrix of μ∘τ∘Δ on A."""
    F = k.field
    return F.chain(k.A.mult, swap_matrix(k.A.dim, k.A.dim, F), k.A.comult)


def check_barnatan(c: FrobeniusData) -> AxiomReport:
    """The sphere (S), torus (T) and four-tube (4Tu) relations of a closed algebra."""
    F = c.field
    d = c.dim
    I = F.eye(d)
    M, D, u, e = c.mult, c.comult, c.unit, c.counit
    report = AxiomReport()
    report.record("S", F.matmul(e, u))
    torus = F.chain(e, M, D, u)
    report.record("T", F.sub(torus, F.array([[2]])))
    eta_eps = F.matmul(u, e)
    four_tube = F.add(F.matmul(F.matmul(D, u), F.kron(e, e)),
                      F.matmul(F.kron(u, u), F.matmul(e, M)))
    four_tube = F.sub(four_tube, F.kron(eta_eps, I))
    four_tube = F.sub(four_tube, F.kron(I, eta_eps))
    report.record("4Tu", four_tube, (d, d), (d, d))
    return report


def check_euler_degrees(k: KnowledgeableFrobenius) -> AxiomReport:
    """
    Check the Euler degrees of all ten structure maps.

    Raises:
        GradingAbsent: If either algebra is ungraded
    """
    A, C = k.A, k.C
    if A.grading_mode is GradingMode.NONE or C.grading_mode is GradingMode.NONE:
        raise GradingAbsent("both algebras need a grading or a filtration")
    if GradingMode.FILTERED in (A.grading_mode, C.grading_mode):
        mode = GradingMode.FILTERED
    else:
        mode = GradingMode.GRADED
    report = AxiomReport()
    for suffix, f in (("A", A), ("C", C)):
        for name, (matrix, out_deg, in_deg, _) in _structure_maps(f).items():
            key = f"{name}_{suffix}"
            report.record_index(key, _degree_violation(matrix, out_deg, in_deg,
                                                       EULER_DEGREES[key], mode))
    report.record_index("iota", _degree_violation(k.iota, A.degrees, C.degrees,
                                                  EULER_DEGREES["iota"], mode))
    report.record_index("iota_star", _degree_violation(k.iota_star, C.degrees, A.degrees,
                                                       EULER_DEGREES["iota_star"], mode))
    return report


def associated_graded_frobenius(f: FrobeniusData) -> FrobeniusData:
    """Keep only the structure-constant entries of exact Euler degree."""
    if f.grading_mode is GradingMode.NONE:
        raise GradingAbsent(f"{f.basis} carries no filtration")
    d = f.dim
    maps = _structure_maps(f)
    truncated = {name: _truncate(*maps[name]) for name in maps}
    return FrobeniusData(
        f.field,
        f.basis,
        _mu_tensor(truncated["mu"], d),
        truncated["eta"].reshape(d),
        _delta_tensor(truncated["delta"], d),
        truncated["eps"].reshape(d),
        f.degrees,
        GradingMode.GRADED,
        f.closed,
    )


def associated_graded(k: KnowledgeableFrobenius) -> KnowledgeableFrobenius:
    A = associated_graded_frobenius(k.A)
    C = associated_graded_frobenius(k.C)
    iota = _truncate(k.iota, k.A.degrees, k.C.degrees, EULER_DEGREES["iota"])
    iota_star = _truncate(k.iota_star, k.C.degrees, k.A.degrees, EULER_DEGREES["iota_star"])
    return KnowledgeableFrobenius(A, C, iota, iota_star, f"gr({k.name})" if k.name else "")


# ============================================================================
# Windows and separability
# ============================================================================


def window(f: FrobeniusData) -> tuple[Matrix, Optional[Matrix]]:
    """The window element a = μ∘Δ∘η(1) and its two-sided inverse, if any."""
    F = f.field
    a = F.chain(f.mult, f.comult, f.unit).reshape(f.dim)
    a_inv = solve(f.left_mult(a), f.eta, F)
    if a_inv is not None and not np.array_equal(f.product(a_inv, a), f.eta):
        a_inv = None
    return a, a_inv


def canonical_form(f: FrobeniusData) -> Matrix:
    """Gram matrix of (x, y) ↦ tr(L_x L_y)."""
    return f.field.reduce(np.tensordot(f.mu, f.mu, axes=([1, 2], [2, 1])))


def is_strongly_separable(f: FrobeniusData) -> bool:
    """
    Raises:
        SeparabilityMismatch: If the canonical form and the window element
            disagree for a symmetric algebra
    """
    separable = rank(canonical_form(f), f.field) == f.dim
    if is_symmetric(f):
        invertible = window(f)[1] is not None
        if invertible != separable:
            raise SeparabilityMismatch(
                f"canonical form nondegenerate={separable} but window invertible={invertible}"
            )
    return separable


def state_sum_kfrob(f: FrobeniusData) -> KnowledgeableFrobenius:
    """
    The knowledgeable Frobenius algebra induced by a strongly separable
    symmetric Frobenius algebra.

    C is the centre Z(A) in the canonical basis given by the reduced
    echelon form of the image of p = a⁻¹ · μ∘τ∘Δ, with structure maps

        μ_C = p∘μ, η_C = p∘η, Δ_C = (p⊗p)∘Δ∘(a·), ε_C = ε∘(a⁻¹·),
        ι = inclusion, ι* = (a·)∘p.

    Raises:
        NotStronglySeparable: If A is not symmetric or a is not invertible
    """
    if not is_symmetric(f):
        raise NotStronglySeparable("the Frobenius form is not symmetric")
    a, a_inv = window(f)
    if a_inv is None:
        raise NotStronglySeparable(f"window element {f.describe(a)} is not invertible over {f.field}")
    F = f.field
    d = f.dim
    p = F.chain(f.left_mult(a_inv), f.mult, swap_matrix(d, d, F), f.comult)
    iota, pivots = column_space_basis(p, F)
    c = iota.shape[1]
    to_centre = p[pivots, :]
    left_a = f.left_mult(a)

    mult = F.chain(to_centre, f.mult, F.kron(iota, iota))
    eta = F.matmul(to_centre, f.unit).reshape(c)
    comult = F.chain(F.kron(to_centre, to_centre), f.comult, left_a, iota)
    eps = F.chain(f.counit, f.left_mult(a_inv), iota).reshape(c)
    iota_star = F.matmul(left_a, p)[pivots, :]

    labels = []
    degrees = []
    for j in range(c):
        support = np.nonzero(iota[:, j] != 0)[0]
        if len(support) == 1 and iota[support[0], j] == 1:
            labels.append(f.basis[support[0]])
        else:
            labels.append(f"z{j}")
        degrees.append(2 * min(f.degrees[i] for i in support))
    if f.grading_mode is GradingMode.NONE:
        degrees = [0] * c
    C = FrobeniusData(F, tuple(labels), _mu_tensor(mult, c), eta, _delta_tensor(comult, c), eps,
                      tuple(degrees), f.grading_mode, closed=True)
    logger.debug("state sum centre of dimension %d from pivots %s", c, pivots)
    return KnowledgeableFrobenius(f, C, iota, iota_star)


def idempotents_PQ(f: FrobeniusData, j: int, l: int) -> tuple[Matrix, Matrix]:
    """
    The maps P_jl, Q_jl: A^{⊗l} → A^{⊗j} of the open and closed gluings.

    P_jl = Δ^(j) ∘ a^{-(j-1)} ∘ μ^(l) and Q_jl additionally inserts p.

    Raises:
        NotStronglySeparable: If the window element is not invertible
    """
    if not (1 <= j <= 4 and 1 <= l <= 4):
        raise DimensionMismatch(f"P_{j}{l} is only built for 1 <= j, l <= 4")
    F = f.field
    d = f.dim
    a, a_inv = window(f)
    if a_inv is None:
        raise NotStronglySeparable(f"window element {f.describe(a)} is not invertible over {f.field}")
    I = F.eye(d)
    mu_l = I
    for _ in range(l - 1):
        mu_l = F.matmul(f.mult, F.kron(mu_l, I))
    delta_j = I
    for _ in range(j - 1):
        delta_j = F.matmul(F.kron(delta_j, I), f.comult)
    inv_power = I
    left_inv = f.left_mult(a_inv)
    for _ in range(j - 1):
        inv_power = F.matmul(left_inv, inv_power)
    p = F.chain(left_inv, f.mult, swap_matrix(d, d, F), f.comult)
    P = F.chain(delta_j, inv_power, mu_l)
    Q = F.chain(delta_j, inv_power, p, mu_l)
    return P, Q


# ============================================================================
# JSON documents
# ============================================================================


def dump_algebra(obj: FrobeniusData | KnowledgeableFrobenius) -> dict:
    return {"version": JSON_VERSION, **obj.as_dict()}


def _load_frobenius(doc: dict) -> FrobeniusData:
    try:
        field = FieldSpec(int(doc["field"]["char"]))
        basis = tuple(doc["basis"])
        if int(doc["dim"]) != len(basis):
            raise DimensionMismatch(f"dim {doc['dim']} but {len(basis)} basis labels")
        return FrobeniusData(
            field,
            basis,
            field.array(doc["mu"]),
            field.array(doc["eta"]),
            field.array(doc["delta"]),
            field.array(doc["eps"]),
            tuple(int(x) for x in doc.get("degrees", [0] * len(basis))),
            GradingMode(doc.get("grading_mode", "none")),
            bool(doc.get("closed", False)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise AlgebraFormatError(f"cannot read algebra document: {e}") from e


def load_algebra(doc: dict) -> FrobeniusData | KnowledgeableFrobenius:
    if doc.get("version") != JSON_VERSION:
        raise AlgebraFormatError(f"unsupported algebra document version {doc.get('version')}")
    if "A" in doc:
        A = _load_frobenius(doc["A"])
        C = _load_frobenius(doc["C"])
        try:
            return KnowledgeableFrobenius(A, C, A.field.array(doc["iota"]),
                                          A.field.array(doc["iota_star"]), doc.get("name", ""))
        except KeyError as e:
            raise AlgebraFormatError(f"missing {e} in knowledgeable algebra document") from e
    return _load_frobenius(doc)


def as_knowledgeable(obj: Any) -> Optional[KnowledgeableFrobenius]:
    """A knowledgeable pair for `obj` when one exists without extra choices."""
    if isinstance(obj, KnowledgeableFrobenius):
        return obj
    if isinstance(obj, FrobeniusData) and not obj.closed:
        return state_sum_kfrob(obj)
    return None
