"""
JSON input schemas and report output

Every parser raises ValidationError naming the offending key, so the command
line can map schema problems to its input-error exit code. Rationals travel
as "p/q" strings and elements of Q(sqrt2, sqrt3) as {"a", "b", "c", "d"}
coefficient records.
"""

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import sympy

from ..algebra.heintze import DiagonalHeintzePair, diagonal_pair, layer_decomposition
from ..algebra.lie_core import LieAlgebra
from ..conformal.similarity import GeneratedGroup, SimilarityElement
from ..exceptions import ValidationError
from ..metric.homogeneous import DInnerProduct
from ..metric.symmetric_space import SpdPoint
from ..modulus.box_ring import BoxRing
from ..utils import (
    format_exact,
    parse_quadratic,
    parse_rational,
    validate_mapping,
    validate_non_empty_list,
)

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    """
    Read a JSON document.

    Raises:
        ValidationError: If the file is missing or malformed, with the line
            and column of the syntax error
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _require(obj: Mapping[str, Any], key: str, context: str) -> Any:
    if not isinstance(obj, Mapping):
        raise ValidationError(f"{context} must be a JSON object")
    if key not in obj:
        raise ValidationError(f"{context} is missing '{key}'")
    return obj[key]


def _index(value: Any, n: int, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= n:
        raise ValidationError(f"{context} must be an integer in 1..{n}, got {value!r}")
    return value - 1


def parse_rational_matrix(rows: Any, context: str = "matrix") -> tuple:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{context} must be a list of rows")
    return tuple(tuple(parse_rational(x) for x in row) for row in rows)


def parse_exact_matrix(rows: Any, context: str = "matrix") -> tuple:
    """Matrix over Q(sqrt2, sqrt3)."""
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{context} must be a list of rows")
    return tuple(tuple(parse_quadratic(x) for x in row) for row in rows)


def parse_vector(values: Any, context: str = "vector") -> tuple:
    if not isinstance(values, list):
        raise ValidationError(f"{context} must be a list")
    return tuple(parse_rational(x) for x in values)


# ==============================================================================
# Algebras and pairs
# ==============================================================================


def parse_algebra(obj: Mapping[str, Any]) -> LieAlgebra:
    """
    {"dim": n, "basis": [...], "brackets": [{"i": 1, "j": 2, "result": [{"k": 3, "c": "1"}]}]}.

    Indices are 1-based; only i < j may be listed.
    """
    dim = _require(obj, "dim", "algebra")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"algebra 'dim' must be a positive integer, got {dim!r}")
    names = obj.get("basis") or [f"e{i + 1}" for i in range(dim)]
    if len(names) != dim:
        raise ValidationError(f"algebra 'basis' lists {len(names)} names for dim {dim}")
    brackets: Dict[tuple, Dict[int, Fraction]] = {}
    for pos, entry in enumerate(obj.get("brackets", [])):
        context = f"brackets[{pos}]"
        i = _index(_require(entry, "i", context), dim, f"{context}.i")
        j = _index(_require(entry, "j", context), dim, f"{context}.j")
        if i >= j:
            raise ValidationError(f"{context} has i >= j; list each bracket once with i < j")
        result = brackets.setdefault((i, j), {})
        for term in _require(entry, "result", context):
            k = _index(_require(term, "k", f"{context}.result"), dim, f"{context}.result.k")
            c = parse_rational(_require(term, "c", f"{context}.result"))
            result[k] = result.get(k, Fraction(0)) + c
    return LieAlgebra.from_brackets(names, brackets)


def algebra_to_dict(algebra: LieAlgebra) -> Dict[str, Any]:
    brackets = []
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            row = algebra.structure[i][j]
            result = [{"k": k + 1, "c": format_exact(c)} for k, c in enumerate(row) if c]
            if result:
                brackets.append({"i": i + 1, "j": j + 1, "result": result})
    return {"dim": algebra.dim, "basis": list(algebra.basis_names), "brackets": brackets}


def parse_pair(obj: Mapping[str, Any]) -> DiagonalHeintzePair:
    """
    An algebra with "derivation" (row-major matrix) or "eigenvalues" (diagonal D).

    The algebra is read from "algebra" or from the top-level keys.
    """
    algebra = parse_algebra(obj.get("algebra", obj))
    if "derivation" in obj:
        return layer_decomposition(algebra, parse_rational_matrix(obj["derivation"], "derivation"))
    if "eigenvalues" in obj:
        return diagonal_pair(algebra, parse_vector(obj["eigenvalues"], "eigenvalues"))
    raise ValidationError("pair needs 'derivation' or 'eigenvalues'")


def parse_inner_product(pair: DiagonalHeintzePair, gram: Any) -> DInnerProduct:
    if gram in (None, "standard"):
        return DInnerProduct.standard(pair)
    if not isinstance(gram, list):
        raise ValidationError("Gram matrix must be a list of rows or 'standard'")
    return DInnerProduct.from_gram(pair, gram)


def parse_inner_products(
    pair: DiagonalHeintzePair, obj: Mapping[str, Any]
) -> Dict[str, DInnerProduct]:
    """Named Gram matrices under "inner_products"; the standard one when absent."""
    grams = obj.get("inner_products") or {"standard": "standard"}
    validate_mapping(grams, "inner_products")
    return {name: parse_inner_product(pair, gram) for name, gram in sorted(grams.items())}


# ==============================================================================
# Similarity groups, points and rings
# ==============================================================================


def parse_similarity(
    pair: DiagonalHeintzePair, obj: Mapping[str, Any], context: str = "element"
) -> SimilarityElement:
    """
    {"n": [...], "s": "p/q", "A": [[...]]} with s = e^t; "t" may be given instead of "s".
    """
    validate_mapping(obj, context)
    translation = parse_vector(obj["n"], "n") if "n" in obj else None
    if "s" in obj:
        scale: Any = parse_rational(obj["s"])
    elif "t" in obj:
        scale = math.exp(float(obj["t"]))
    else:
        scale = 1
    linear = parse_exact_matrix(obj["A"], "A") if "A" in obj else None
    return SimilarityElement(pair, translation, scale, linear)


def parse_group(pair: DiagonalHeintzePair, obj: Mapping[str, Any]) -> GeneratedGroup:
    generators = _require(obj, "generators", "group")
    if not isinstance(generators, list):
        raise ValidationError("generators must be a list of elements")
    validate_non_empty_list(generators, "generators")
    conjugator = obj.get("conjugator")
    return GeneratedGroup(
        pair,
        [parse_similarity(pair, g, f"generators[{i}]") for i, g in enumerate(generators)],
        parse_similarity(pair, conjugator, "conjugator") if conjugator is not None else None,
    )


def _float(value: Any) -> float:
    return float(parse_rational(value)) if isinstance(value, str) else float(value)


def parse_points(obj: Any) -> List[SpdPoint]:
    """{"points": [matrix, ...]} with float or rational entries."""
    raw = _require(obj, "points", "points file")
    validate_non_empty_list(raw, "points")
    return [SpdPoint(np.array([[_float(x) for x in row] for row in m])) for m in raw]


def parse_sample_points(obj: Mapping[str, Any], dim: int) -> List[tuple]:
    raw = obj.get("sample_points") or [[0] * dim]
    return [parse_vector(p, "sample point") for p in raw]


def parse_ring(pair: DiagonalHeintzePair, obj: Mapping[str, Any]) -> BoxRing:
    """{"widths": [[...], ...], "delta": "p/q", "lambdas": [[...], ...]} per layer."""
    widths = tuple(parse_vector(row, "widths") for row in _require(obj, "widths", "ring"))
    lambdas = tuple(parse_vector(row, "lambdas") for row in _require(obj, "lambdas", "ring"))
    return BoxRing(pair, widths, parse_rational(_require(obj, "delta", "ring")), lambdas)


# ==============================================================================
# Output
# ==============================================================================


def to_jsonable(value: Any) -> Any:
    """Rationals and surds to strings, arrays to lists, floats unchanged."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (Fraction, sympy.Expr)):
        return format_exact(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps_report(report: Mapping[str, Any]) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def write_report(report: Mapping[str, Any], out: Optional[PathLike] = None) -> str:
    text = dumps_report(report)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


__all__ = [
    "load_json",
    "parse_rational_matrix",
    "parse_exact_matrix",
    "parse_vector",
    "parse_algebra",
    "algebra_to_dict",
    "parse_pair",
    "parse_inner_product",
    "parse_inner_products",
    "parse_similarity",
    "parse_group",
    "parse_points",
    "parse_sample_points",
    "parse_ring",
    "to_jsonable",
    "dumps_report",
    "write_report",
]
