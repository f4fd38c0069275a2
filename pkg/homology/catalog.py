"""
Built-in Frobenius and knowledgeable Frobenius algebras.

Each builder takes the coefficient field first and keyword parameters
after it. Builders tied to one characteristic raise
`IncompatibleCharacteristic` unless called with `strict=False`, which is how
the counterexamples over the wrong field are produced.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .algebra import (
    FrobeniusData,
    GradingMode,
    IncompatibleCharacteristic,
    KnowledgeableFrobenius,
    change_of_basis,
    direct_sum,
    frobenius_from_counit,
    state_sum_kfrob,
)
from .errors import InputError
from .linalg import FieldSpec

logger = logging.getLogger(__name__)


class UnknownAlgebra(InputError):
    """Raised when a catalog name or parameter is not recognised"""
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., Any]
    description: str
    fields: str


# ============================================================================
# Helpers
# ============================================================================


def _require_char(field: FieldSpec, allowed: set[int], name: str, strict: bool) -> None:
    if strict and field.characteristic not in allowed:
        wanted = ", ".join(str(p) for p in sorted(allowed))
        raise IncompatibleCharacteristic(f"{name} needs characteristic {wanted}, got {field}")


def _table(field: FieldSpec, d: int, products: dict[tuple[int, int], dict[int, Any]]):
    mu = field.zeros((d, d, d))
    for (i, j), terms in products.items():
        for k, c in terms.items():
            mu[i, j, k] = field.element(c)
    return mu


def _vector(field: FieldSpec, d: int, entries: dict[int, Any]):
    v = field.zeros(d)
    for i, c in entries.items():
        v[i] = field.element(c)
    return v


def _matrix(field: FieldSpec, rows: int, cols: int, entries: dict[tuple[int, int], Any]):
    m = field.zeros((rows, cols))
    for (i, j), c in entries.items():
        m[i, j] = field.element(c)
    return m


def _relabel(f: FrobeniusData, basis: tuple[str, ...]) -> FrobeniusData:
    return FrobeniusData(f.field, basis, f.mu, f.eta, f.delta, f.eps, f.degrees,
                         f.grading_mode, f.closed)


def _rank_one_algebra(field: FieldSpec, label: str) -> FrobeniusData:
    """The ground field with ε(1) = 1."""
    return frobenius_from_counit(field, (label,), _table(field, 1, {(0, 0): {0: 1}}),
                                 _vector(field, 1, {0: 1}), _vector(field, 1, {0: 1}))


# ============================================================================
# Frobenius algebras
# ============================================================================


def _quadratic(field: FieldSpec, h: Any, t: Any, basis: tuple[str, str],
               degrees: tuple[int, int], closed: bool) -> FrobeniusData:
    """k[x]/(x² - h x - t) with ε(1) = 0, ε(x) = 1."""
    h, t = field.element(h), field.element(t)
    mu = _table(field, 2, {
        (0, 0): {0: 1},
        (0, 1): {1: 1},
        (1, 0): {1: 1},
        (1, 1): {0: t, 1: h},
    })
    mode = GradingMode.GRADED if h == 0 and t == 0 else GradingMode.FILTERED
    return frobenius_from_counit(field, basis, mu, _vector(field, 2, {0: 1}),
                                 _vector(field, 2, {1: 1}), degrees, mode, closed)


def c_ht(field: FieldSpec, h: Any = 0, t: Any = 0) -> FrobeniusData:
    """The closed algebra C_{h,t} = k[x]/(x² - h x - t)."""
    return _quadratic(field, h, t, ("1", "x"), (2, -2), closed=True)


def a_ht(field: FieldSpec, h: Any = 0, t: Any = 0) -> FrobeniusData:
    """The open algebra A_{h,t} = k[y]/(y² - h y - t)."""
    return _quadratic(field, h, t, ("1", "y"), (1, -1), closed=False)


def matrix_algebra(field: FieldSpec, m: int = 2, alpha: Any = 1) -> FrobeniusData:
    """M_m(k) with ε(e_pq) = δ_pq / α."""
    if m < 1:
        raise UnknownAlgebra(f"matrix size must be positive, got {m}")
    index = {(p, q): p * m + q for p in range(m) for q in range(m)}
    products = {}
    for (p, q), i in index.items():
        for s in range(m):
            products[(i, index[(q, s)])] = {index[(p, s)]: 1}
    d = m * m
    alpha_inv = field.inverse(alpha)
    eta = _vector(field, d, {index[(p, p)]: 1 for p in range(m)})
    eps = _vector(field, d, {index[(p, p)]: alpha_inv for p in range(m)})
    basis = tuple(f"e{p + 1}{q + 1}" for p in range(m) for q in range(m))
    return frobenius_from_counit(field, basis, _table(field, d, products), eta, eps)


def quaternion(field: FieldSpec, alpha: Any = 1) -> FrobeniusData:
    """Quaternions 1, I, J, K with ε(1) = 1/α and ε(I) = ε(J) = ε(K) = 0."""
    one, i, j, k = range(4)
    products = {(one, x): {x: 1} for x in range(4)}
    products.update({(x, one): {x: 1} for x in range(4)})
    products.update({
        (i, i): {one: -1}, (j, j): {one: -1}, (k, k): {one: -1},
        (i, j): {k: 1}, (j, i): {k: -1},
        (j, k): {i: 1}, (k, j): {i: -1},
        (k, i): {j: 1}, (i, k): {j: -1},
    })
    return frobenius_from_counit(field, ("1", "I", "J", "K"), _table(field, 4, products),
                                 _vector(field, 4, {one: 1}),
                                 _vector(field, 4, {one: field.inverse(alpha)}))


# ============================================================================
# Knowledgeable pairs over C_{h,t}
# ============================================================================


def khovanov_pair(field: FieldSpec, strict: bool = True) -> KnowledgeableFrobenius:
    """A = k[y]/(y²) over C_{0,0}; knowledgeable only in characteristic 2."""
    _require_char(field, {2}, "khovanov_pair", strict)
    A = a_ht(field, 0, 0)
    C = c_ht(field, 0, 0)
    iota = _matrix(field, 2, 2, {(0, 0): 1})
    iota_star = _matrix(field, 2, 2, {(1, 1): 1})
    return KnowledgeableFrobenius(A, C, iota, iota_star, "khovanov_pair")


def truncated_poly(field: FieldSpec, n: Optional[int] = None,
                   strict: bool = True) -> KnowledgeableFrobenius:
    """A = k[y]/(y^n) over C_{0,0}; knowledgeable when n is the characteristic."""
    n = field.characteristic if n is None else int(n)
    if n < 2:
        raise IncompatibleCharacteristic(f"truncated_poly needs an exponent >= 2, got {n}")
    _require_char(field, {n}, "truncated_poly", strict)
    products = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    basis = ("1", "y") + tuple(f"y^{i}" for i in range(2, n))
    if n in (2, 3):
        step = 2 // (n - 1)
        degrees = tuple(1 - step * i for i in range(n))
        mode = GradingMode.GRADED
    else:
        degrees = (0,) * n
        mode = GradingMode.NONE
    A = frobenius_from_counit(field, basis, _table(field, n, products),
                              _vector(field, n, {0: 1}), _vector(field, n, {n - 1: 1}),
                              degrees, mode)
    C = c_ht(field, 0, 0)
    if mode is GradingMode.NONE:
        C = FrobeniusData(field, C.basis, C.mu, C.eta, C.delta, C.eps, (0, 0),
                          GradingMode.NONE, True)
    iota = _matrix(field, n, 2, {(0, 0): 1})
    iota_star = _matrix(field, 2, n, {(1, n - 1): 1})
    return KnowledgeableFrobenius(A, C, iota, iota_star, f"truncated_poly({n})")


def modp_X(field: FieldSpec, p: Optional[int] = None, strict: bool = True) -> KnowledgeableFrobenius:
    """
    The graded algebra on X_{-n}, ..., X_n (p = 2n + 1) with unit X_1,
    X_j X_{-j} = X_{-1} and all other products of non-units zero.
    """
    p = field.characteristic if p is None else int(p)
    if p < 3 or p % 2 == 0:
        raise IncompatibleCharacteristic(f"modp_X needs an odd prime, got {p}")
    _require_char(field, {p}, "modp_X", strict)
    n = (p - 1) // 2
    idx = {i: i + n for i in range(-n, n + 1)}
    products: dict[tuple[int, int], dict[int, Any]] = {}
    for j in range(-n, n + 1):
        products[(idx[j], idx[-j])] = {idx[-1]: 1}
    for j in range(-n, n + 1):
        products[(idx[1], idx[j])] = {idx[j]: 1}
        products[(idx[j], idx[1])] = {idx[j]: 1}
    A = frobenius_from_counit(field, tuple(f"X{i}" for i in range(-n, n + 1)),
                              _table(field, p, products), _vector(field, p, {idx[1]: 1}),
                              _vector(field, p, {idx[-1]: 1}), tuple(range(-n, n + 1)),
                              GradingMode.GRADED)
    C = c_ht(field, 0, 0)
    iota = _matrix(field, p, 2, {(idx[1], 0): 1})
    iota_star = _matrix(field, 2, p, {(1, idx[-1]): 1})
    return KnowledgeableFrobenius(A, C, iota, iota_star, f"modp_X({p})")


def barnatan_pair(field: FieldSpec, t: Any = 0, strict: bool = True) -> KnowledgeableFrobenius:
    """A = A_{1,t} over C_{1,t} with ι(x) = y and ι*(y) = x."""
    _require_char(field, {2}, "barnatan_pair", strict)
    A = a_ht(field, 1, t)
    C = c_ht(field, 1, t)
    return KnowledgeableFrobenius(A, C, field.eye(2), field.eye(2), "barnatan_pair")


def lee_pair(field: FieldSpec, t: Any = 1, strict: bool = True) -> KnowledgeableFrobenius:
    """A = A_{0,t} over C_{0,t²} with ι(x) = t and ι*(y) = t + x."""
    _require_char(field, {2}, "lee_pair", strict)
    t = field.element(t)
    A = a_ht(field, 0, t)
    C = c_ht(field, 0, t * t)
    iota = _matrix(field, 2, 2, {(0, 0): 1, (0, 1): t})
    iota_star = _matrix(field, 2, 2, {(0, 1): t, (1, 1): 1})
    return KnowledgeableFrobenius(A, C, iota, iota_star, "lee_pair")


# ============================================================================
# State-sum examples in characteristic 5
# ============================================================================


MATRIX_PLUS_K_DEGREES = {
    "standard": (1, 0, 0, 0, -1),
    "alternative": (1, -2, 2, 0, -1),
}


def m2k_plus_k(field: FieldSpec, filtration: str = "standard",
               strict: bool = True) -> KnowledgeableFrobenius:
    """
    M₂(k) ⊕ k with window 1, in the basis 1 = (I, 1), A = E12, B = E21,
    C = E11 - E22, D = (0, 1).
    """
    _require_char(field, {5}, "m2k_plus_k", strict)
    try:
        degrees = MATRIX_PLUS_K_DEGREES[filtration]
    except KeyError as e:
        raise UnknownAlgebra(f"unknown filtration '{filtration}'") from e
    summed = direct_sum(matrix_algebra(field, 2, field.inverse(2)), _rank_one_algebra(field, "e"))
    columns = [
        [1, 0, 0, 1, 1],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [1, 0, 0, -1, 0],
        [0, 0, 0, 0, 1],
    ]
    P = field.array(columns).T
    A = change_of_basis(summed, P, ("1", "A", "B", "C", "D"), degrees, GradingMode.FILTERED)
    k = state_sum_kfrob(A)
    return KnowledgeableFrobenius(A, _relabel(k.C, ("1", "x")), k.iota, k.iota_star,
                                  f"m2k_plus_k({filtration})")


def hk_plus_k(field: FieldSpec, strict: bool = True) -> KnowledgeableFrobenius:
    """ℍ ⊕ k with window 1, in the basis 1 = (1, 1), I, J, K, L = (0, 1)."""
    _require_char(field, {5}, "hk_plus_k", strict)
    summed = direct_sum(quaternion(field, field.inverse(4)), _rank_one_algebra(field, "e"))
    columns = [
        [1, 0, 0, 0, 1],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ]
    P = field.array(columns).T
    A = change_of_basis(summed, P, ("1", "I", "J", "K", "L"), (1, 0, 0, 0, -1),
                        GradingMode.FILTERED)
    k = state_sum_kfrob(A)
    return KnowledgeableFrobenius(A, _relabel(k.C, ("1", "x")), k.iota, k.iota_star, "hk_plus_k")


# ============================================================================
# Registry
# ============================================================================


CATALOG: dict[str, CatalogEntry] = {
    entry.name: entry
    for entry in (
        CatalogEntry("c_ht", c_ht, "closed algebra k[x]/(x²-hx-t)", "any"),
        CatalogEntry("a_ht", a_ht, "open algebra k[y]/(y²-hy-t)", "any"),
        CatalogEntry("khovanov_pair", khovanov_pair, "k[y]/(y²) over C_{0,0}", "2"),
        CatalogEntry("truncated_poly", truncated_poly, "k[y]/(y^p) over C_{0,0}", "p"),
        CatalogEntry("modp_X", modp_X, "graded X_{-n}..X_n over C_{0,0}", "odd p"),
        CatalogEntry("barnatan_pair", barnatan_pair, "A_{1,t} over C_{1,t}", "2"),
        CatalogEntry("lee_pair", lee_pair, "A_{0,t} over C_{0,t²}", "2"),
        CatalogEntry("matrix", matrix_algebra, "matrix algebra M_m(k), ε = tr/α", "any"),
        CatalogEntry("quaternion", quaternion, "quaternions, ε = Re/α", "any"),
        CatalogEntry("m2k_plus_k", m2k_plus_k, "M₂(k)⊕k state sum over C_{1,0}", "5"),
        CatalogEntry("hk_plus_k", hk_plus_k, "ℍ⊕k state sum over C_{1,0}", "5"),
    )
}


def builtin(name: str, field: FieldSpec,
            params: Optional[dict[str, Any]] = None) -> FrobeniusData | KnowledgeableFrobenius:
    """
    Build a catalog algebra by name.

    Raises:
        UnknownAlgebra: If the name or a parameter is not recognised
        IncompatibleCharacteristic: If the field does not fit the entry
    """
    try:
        entry = CATALOG[name]
    except KeyError as e:
        raise UnknownAlgebra(f"unknown algebra '{name}'; try one of {sorted(CATALOG)}") from e
    params = {key: value for key, value in (params or {}).items() if value is not None}
    logger.debug("building %s over %s with %s", name, field, params)
    try:
        return entry.builder(field, **params)
    except TypeError as e:
        raise UnknownAlgebra(f"bad parameters {sorted(params)} for '{name}': {e}") from e
