"""
Pages of the spectral sequence of the internal-degree filtration.

With F^p C the span of basis vectors of internal degree >= p,

    Z_r^{p,n} = {x ∈ F^p C^n : dx ∈ F^{p+r} C^{n+1}}
    E_r^{p,n} = Z_r^{p,n} / (Z_{r-1}^{p+1,n} + d Z_{r-1}^{p-r+1,n-1})

and d_r: E_r^{p,n} → E_r^{p+r,n+1} is induced by d. Pages are reported in
the index (k, i) = (p, n - p), so d_r has bidegree (r, 1 - r).
"""

import logging
from dataclasses import dataclass

import numpy as np

from .algebra import GradingMode
from .complex import BigradedDims, FilteredChainComplex
from .linalg import Matrix, independent_columns, kernel_basis, rank, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralPage:
    r: int
    ranks: dict[tuple[int, int], int]
    differentials: dict[tuple[int, int], Matrix]

    def rank(self, k: int, i: int) -> int:
        return self.ranks.get((k, i), 0)

    def by_total_degree(self) -> BigradedDims:
        """The same ranks keyed (k, n) with n = k + i, as for homology tables."""
        return BigradedDims({(k, k + i): v for (k, i), v in self.ranks.items()})


def _cycles(c: FilteredChainComplex, n: int, p: int, r: int) -> Matrix:
    """Columns span Z_r^{p,n} inside C^n."""
    F = c.field
    degrees = c.degrees(n)
    cols = np.nonzero(degrees >= p)[0]
    out = F.zeros((len(degrees), 0))
    if len(cols) == 0:
        return out
    rows = np.nonzero(c.degrees(n + 1) < p + r)[0]
    sub = c.differential(n)[np.ix_(rows, cols)]
    ker = kernel_basis(sub, F)
    out = F.zeros((len(degrees), ker.shape[1]))
    out[cols, :] = ker
    return out


def _denominator(c: FilteredChainComplex, n: int, p: int, r: int) -> Matrix:
    F = c.field
    lower = _cycles(c, n, p + 1, r - 1)
    incoming = _cycles(c, n - 1, p - r + 1, r - 1)
    if incoming.shape[1]:
        lower = np.hstack([lower, F.matmul(c.differential(n - 1), incoming)])
    return lower


def spectral_page(c: FilteredChainComplex, r: int) -> SpectralPage:
    """
    Ranks of E_r and the matrices of d_r in the bases of chosen
    representatives. E_0 is the associated graded complex; for r beyond
    the filtration length E_r is the bigraded homology.
    """
    if r < 0:
        raise ValueError(f"page index must be nonnegative, got {r}")
    F = c.field
    logger.info("### Computing page E_%d ###", r)
    reps: dict[tuple[int, int], Matrix] = {}
    dens: dict[tuple[int, int], Matrix] = {}
    ranks = {}
    for n in c.r_range:
        for p in sorted(set(int(k) for k in c.degrees(n))):
            cycles = _cycles(c, n, p, r)
            den = _denominator(c, n, p, r)
            chosen = independent_columns(den, cycles, F)
            if chosen:
                ranks[(p, n - p)] = len(chosen)
                reps[(p, n)] = cycles[:, chosen]
                dens[(p, n)] = den
                logger.debug("E_%d^{%d,%d} has rank %d", r, p, n - p, len(chosen))

    differentials = {}
    for (p, n), source in reps.items():
        key = (p + r, n + 1)
        if key not in reps:
            continue
        image = F.matmul(c.differential(n), source)
        target = reps[key]
        basis = np.hstack([target, dens[key]]) if dens[key].shape[1] else target
        coords = solve(basis, image, F)
        if coords is None:
            raise ValueError(f"d_{r} image at {(p, n)} escapes Z_{r}^{key}")
        differentials[(p, n - p)] = coords[:target.shape[1], :]
    return SpectralPage(r, ranks, differentials)


def page_sequence(c: FilteredChainComplex, pages: int) -> list[SpectralPage]:
    return [spectral_page(c, r) for r in range(pages + 1)]


def check_page_homology(c: FilteredChainComplex, r: int) -> bool:
    """rank E_{r+1} = rank ker d_r - rank im d_r, entry by entry."""
    page = spectral_page(c, r)
    following = spectral_page(c, r + 1)
    F = c.field
    for (k, i), dim in page.ranks.items():
        out = page.differentials.get((k, i))
        incoming = page.differentials.get((k - r, i + r - 1))
        expected = dim - (rank(out, F) if out is not None else 0)
        expected -= rank(incoming, F) if incoming is not None else 0
        if following.rank(k, i) != expected:
            return False
    return all((k, i) in page.ranks for (k, i) in following.ranks)


def associated_graded_complex(c: FilteredChainComplex) -> FilteredChainComplex:
    """The E_0 page as a complex: d with every degree-raising entry dropped."""
    F = c.field
    differentials = {}
    for r, d in c.differentials.items():
        out = c.degrees(r + 1).reshape(-1, 1)
        inn = c.degrees(r).reshape(1, -1)
        kept = d.copy()
        kept[np.broadcast_to(out != inn, d.shape)] = 0
        differentials[r] = F.reduce(kept)
    return FilteredChainComplex(F, dict(c.terms), differentials, GradingMode.GRADED, dict(c.vertices))
