"""
Glue between the management commands and the computation modules: algebra
selection, tangle input, the tangle complex and the Reidemeister suite.
"""

import inspect
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from django.conf import settings

from .algebra import (
    AlgebraFormatError,
    AxiomReport,
    FrobeniusData,
    GradingMode,
    KnowledgeableFrobenius,
    check_barnatan,
    is_strongly_separable,
    is_symmetric,
    load_algebra,
    state_sum_kfrob,
    validate_frobenius,
    validate_knowledgeable,
)
from .catalog import CATALOG, UnknownAlgebra, builtin
from .complex import FilteredChainComplex, homology_bigraded, total_complex
from .cube import realize_cube
from .generators import MOVES, random_move_pairs
from .linalg import FieldSpec
from .spectral import spectral_page
from .tangle import MalformedInput, TangleDiagram, build_cube, parse_diagram

logger = logging.getLogger(__name__)

SIZE_PARAMETER = {
    "truncated_poly": "n",
    "modp_X": "p",
    "matrix": "m",
}

PAGES = (1, 2, 3)


@dataclass(frozen=True)
class AlgebraChoice:
    name: str
    obj: FrobeniusData | KnowledgeableFrobenius

    @property
    def field(self) -> FieldSpec:
        return self.obj.field

    def for_cube(self) -> FrobeniusData | KnowledgeableFrobenius:
        """What realize_cube should receive: a pair, or a closed algebra for links."""
        if isinstance(self.obj, FrobeniusData) and not self.obj.closed:
            return state_sum_kfrob(self.obj)
        return self.obj

    @property
    def closed_algebra(self) -> FrobeniusData:
        target = self.for_cube()
        return target.C if isinstance(target, KnowledgeableFrobenius) else target


def _builder_params(name: str, h: Any, t: Any, alpha: Any, size: Optional[int],
                    strict: bool) -> dict[str, Any]:
    params: dict[str, Any] = {"h": h, "t": t, "alpha": alpha}
    if size is not None:
        if name not in SIZE_PARAMETER:
            raise UnknownAlgebra(f"--size does not apply to '{name}'")
        params[SIZE_PARAMETER[name]] = size
    if not strict and "strict" in inspect.signature(CATALOG[name].builder).parameters:
        params["strict"] = False
    return params


def choose_algebra(algebra: Optional[str] = None, char: Optional[int] = None, h: Any = None,
                   t: Any = None, alpha: Any = None, size: Optional[int] = None,
                   algebra_file: Optional[str] = None, strict: bool = True) -> AlgebraChoice:
    """
    Pick a catalog algebra, or load one from a JSON document. Unset values
    fall back to OCTH_ALGEBRA and OCTH_CHAR.

    Raises:
        AlgebraFormatError: If the algebra file cannot be read
        UnknownAlgebra: If the catalog name or a parameter is not recognised
    """
    if algebra_file:
        path = Path(algebra_file)
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise AlgebraFormatError(f"cannot read {path}: {e}") from e
        obj = load_algebra(doc)
        name = getattr(obj, "name", "") or path.stem
        return AlgebraChoice(name, obj)
    name = algebra or settings.DEFAULT_ALGEBRA
    if name not in CATALOG:
        raise UnknownAlgebra(f"unknown algebra '{name}'; try one of {sorted(CATALOG)}")
    field = FieldSpec(settings.DEFAULT_CHAR if char is None else char)
    return AlgebraChoice(name, builtin(name, field, _builder_params(name, h, t, alpha, size, strict)))


def read_diagram(source: str) -> TangleDiagram:
    """
    Read a slice word from a path, a name under the bundled tangle
    directory, or standard input when `source` is "-".

    Raises:
        MalformedInput: If the file is missing, unparsable or too large
    """
    if source == "-":
        text = sys.stdin.read()
    else:
        path = Path(source)
        if not path.exists():
            bundled = Path(settings.TANGLE_DIR) / source
            path = bundled if bundled.exists() else bundled.with_suffix(".tangle")
        try:
            text = path.read_text()
        except OSError as e:
            raise MalformedInput(f"cannot read tangle file '{source}'") from e
    diagram = parse_diagram(text)
    if diagram.n > settings.MAX_CROSSINGS:
        raise MalformedInput(f"{diagram.n} crossings exceed the limit of {settings.MAX_CROSSINGS}")
    return diagram


def tangle_complex(diagram: TangleDiagram, epsilon: int, choice: AlgebraChoice) -> FilteredChainComplex:
    realized = realize_cube(build_cube(diagram, epsilon), choice.for_cube())
    return total_complex(realized)


def header(choice: AlgebraChoice, epsilon: Optional[int] = None) -> str:
    text = f"# field={choice.field} algebra={choice.name}"
    if epsilon is not None:
        text += f" epsilon={epsilon:+d}"
    return text


def algebra_report(obj: FrobeniusData | KnowledgeableFrobenius) -> AxiomReport:
    report = AxiomReport()
    if isinstance(obj, KnowledgeableFrobenius):
        report.merge("pair", validate_knowledgeable(obj))
        if obj.C.dim == 2:
            report.merge("barnatan", check_barnatan(obj.C))
        report.flags["strongly_separable"] = is_strongly_separable(obj.A)
        return report
    report.merge("algebra", validate_frobenius(obj))
    if obj.closed and obj.dim == 2:
        report.merge("barnatan", check_barnatan(obj))
    if not obj.closed and is_symmetric(obj):
        report.flags["strongly_separable"] = is_strongly_separable(obj)
    return report


# ============================================================================
# Reidemeister suite
# ============================================================================


def parse_moves(text: str) -> list[str]:
    """
    Raises:
        MalformedInput: If the list is empty or names an unknown move
    """
    moves = [m.strip() for m in text.split(",") if m.strip()]
    if not moves or any(m not in MOVES for m in moves):
        raise MalformedInput(f"moves must be a comma-separated subset of {','.join(MOVES)}")
    return moves


def invariant_tables(diagram: TangleDiagram, epsilon: int, choice: AlgebraChoice) -> dict[str, dict]:
    """Bigraded homology for graded complexes, pages E_1..E_3 for filtered ones."""
    c = tangle_complex(diagram, epsilon, choice)
    if c.mode is GradingMode.FILTERED:
        return {f"E{r}": spectral_page(c, r).ranks for r in PAGES}
    return {"H": homology_bigraded(c).ranks}


def reidemeister_suite(seed: int, moves: list[str], n_max: int, choice: AlgebraChoice,
                       epsilon: int = 1, count: int = 5) -> dict:
    """
    Compare rank tables across seeded random Reidemeister move pairs.

    Returns:
        A report with one entry per pair and an overall "passed" flag
    """
    closed_only = isinstance(choice.obj, FrobeniusData) and choice.obj.closed
    logger.info("### Reidemeister suite: seed %d, moves %s, n <= %d ###", seed, moves, n_max)
    results = []
    for index, pair in enumerate(random_move_pairs(seed, moves, count, n_max, links_only=closed_only)):
        before = TangleDiagram.from_word(pair.before)
        after = TangleDiagram.from_word(pair.after)
        left = invariant_tables(before, epsilon, choice)
        right = invariant_tables(after, epsilon, choice)
        passed = left == right
        if not passed:
            logger.warning("%s pair %d differs at site %d", pair.move, index, pair.site)
        results.append({
            "move": pair.move,
            "index": index,
            "n_before": before.n,
            "n_after": after.n,
            "passed": passed,
            "pair": pair.as_dict(),
        })
    return {
        "seed": seed,
        "moves": moves,
        "n_max": n_max,
        "pairs": results,
        "passed": all(r["passed"] for r in results),
    }
