"""
Command-line front end

Each command reads a JSON document (a file given with --input, a bundled
example given with --example, or the command's default example), runs one
library operation and writes a deterministic JSON report to stdout or --out.
Logs go to stderr.

Exit codes: 0 when every assertion in the report holds, 1 when one fails
(the report carries the witness), 2 on input errors.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from .__version__ import __version__
from .algebra.heintze import (
    DiagonalHeintzePair,
    carnot_grading,
    flag_report,
    is_carnot_type,
    pair_summary,
    preserved_sequence,
)
from .algebra.lie_core import validate
from .automorphisms.finite_groups import SEMIDIRECT_NAME
from .automorphisms.iso_aut import automorphism_report, no_conjugation_verdict
from .conformal.similarity import SimilarityElement
from .conformal.structure import (
    blowup_demo,
    constant_field,
    first_layer_block,
    invariance_residual,
    invariant_structure,
)
from .constants import Command, Defaults, ExitCode, Tolerance, Verdict
from .exceptions import (
    CarnotConformalError,
    FlagNotPreservedError,
    OrbitNotStableError,
    ValidationError,
)
from .io.examples import example_index, load_example, resolve_pair
from .io.serialization import (
    load_json,
    parse_algebra,
    parse_group,
    parse_inner_products,
    parse_points,
    parse_ring,
    parse_sample_points,
    write_report,
)
from .metric.homogeneous import (
    ContactShear,
    carnot_dilation_matrix,
    conjugate_map,
    homogeneity_check,
    homogeneous_dimension,
    quasi_triangle_constant,
)
from .metric.pansu import pansu_differential
from .metric.symmetric_space import SpdPoint, circumcenter, dilatation, distance
from .modulus.box_ring import (
    first_layer_padding,
    inclusion_check,
    padding_from_polynomials,
    padding_polynomials,
    rescale_ring,
    rigidity_check,
    segment_family_modulus,
    upper_volume_bound,
)
from .utils import format_exact

logger = logging.getLogger(__name__)

Report = Dict[str, Any]


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; identical configs give identical reports."""

    command: str
    input: Optional[Path] = None
    example: Optional[str] = None
    seed: int = Defaults.SEED
    tol: float = Defaults.TOL
    samples: int = Defaults.SAMPLES
    word_cap: int = Defaults.WORD_CAP
    t_range: float = Defaults.T_RANGE
    out: Optional[Path] = None
    verbosity: int = 0


DEFAULT_EXAMPLES = {
    Command.VALIDATE: "heisenberg",
    Command.ANALYZE: "heisenberg",
    Command.SEQUENCE: "heisenberg",
    Command.METRIC_CHECK: "heisenberg",
    Command.CIRCUMCENTER: "points-sl2",
    Command.INVARIANT: "group-rotation-conjugated",
    Command.ISO_AUT: "abelian-r2",
    Command.COUNTEREXAMPLE: "hxh",
    Command.MODULUS_DEMO: "ring-heisenberg",
    Command.BLOWUP_DEMO: "heisenberg",
}


def _document(config: RunConfig) -> Dict[str, Any]:
    if config.input is not None:
        doc = load_json(config.input)
    else:
        doc = load_example(config.example or DEFAULT_EXAMPLES[config.command])
    if not isinstance(doc, dict):
        raise ValidationError("input document must be a JSON object")
    return doc


def _pair(config: RunConfig) -> Tuple[DiagonalHeintzePair, Any]:
    doc = _document(config)
    return resolve_pair(doc), doc


def _matrix(rows: Any) -> List[List[str]]:
    return [[format_exact(x) for x in row] for row in rows]


# ==============================================================================
# Commands
# ==============================================================================


def _validate(config: RunConfig) -> Tuple[bool, Report]:
    doc = _document(config)
    report = validate(parse_algebra(doc.get("algebra", doc))).to_dict()
    return report["antisymmetry_ok"] and report["jacobi_ok"], report


def _analyze(config: RunConfig) -> Tuple[bool, Report]:
    pair, _ = _pair(config)
    grading = carnot_grading(pair) if is_carnot_type(pair) else None
    report = pair_summary(pair, grading)
    report["nilpotency_class"] = pair.algebra.nilpotency_class
    report["homogeneous_dimension"] = homogeneous_dimension(pair) if grading else None
    return True, report


def _sequence(config: RunConfig) -> Tuple[bool, Report]:
    pair, _ = _pair(config)
    flag = preserved_sequence(pair)
    report: Report = {"dims": list(flag.dims), "steps": flag_report(flag)}
    try:
        flag.verify()
    except FlagNotPreservedError as exc:
        report["witness"] = str(exc)
        return False, report
    return True, report


def _metric_check(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    results = {}
    ok = True
    for name, ip in parse_inner_products(pair, doc).items():
        check = homogeneity_check(pair, ip, config.samples, config.seed, config.t_range)
        entry = check.to_dict()
        entry["quasi_triangle_constant"] = quasi_triangle_constant(
            pair, ip, config.samples, config.seed
        )
        results[name] = entry
        ok = ok and check.ok
    return ok, {"inner_products": results}


def _circumcenter(config: RunConfig) -> Tuple[bool, Report]:
    points = parse_points(_document(config))
    result = circumcenter(points, config.tol)
    distances = [distance(result.center, p) for p in points]
    excess = max(distances) - result.radius
    report = {
        "center": result.center.to_list(),
        "radius": result.radius,
        "iterations": result.iterations,
        "distances": distances,
        "radius_excess": excess,
        "tolerance": Tolerance.DISTANCE,
    }
    return excess <= Tolerance.DISTANCE, report


def _invariant(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    group = parse_group(pair, doc)
    field = constant_field(SpdPoint.identity(pair.first_layer.dim))
    rows = []
    ok = True
    for x in parse_sample_points(doc, pair.dim):
        entry: Report = {"x": [format_exact(c) for c in x]}
        try:
            mu = invariant_structure(group, field, x, config.word_cap, config.tol)
            residual = invariance_residual(group, field, x, config.word_cap, config.tol)
        except OrbitNotStableError as exc:
            entry["witness"] = str(exc)
            ok = False
        else:
            entry.update({"mu": mu.value.to_list(), "residual": residual})
            ok = ok and residual <= Tolerance.INVARIANCE
        rows.append(entry)
    return ok, {"points": rows, "tolerance": Tolerance.INVARIANCE, "word_cap": config.word_cap}


def _iso_aut(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    groups = {
        name: automorphism_report(pair, ip, config.seed).to_dict(include_elements=True)
        for name, ip in parse_inner_products(pair, doc).items()
    }
    return True, {"inner_products": groups}


def _counterexample(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    ips = parse_inner_products(pair, doc)
    if set(ips) != {"d1", "d2"}:
        raise ValidationError("counterexample needs inner products named 'd1' and 'd2'")
    verdict = no_conjugation_verdict(pair, ips["d1"], ips["d2"], config.seed)
    report = verdict.to_dict()
    report["d2"]["elements"] = [_matrix(a) for a in verdict.second.elements]
    ok = (
        verdict.verdict == Verdict.IMPOSSIBLE
        and verdict.first.component_dim == 2
        and verdict.second.finite
        and verdict.second.identification.order == 16
        and verdict.second.identification.name == SEMIDIRECT_NAME
    )
    return ok, report


def _modulus_demo(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    ring = parse_ring(pair, doc)
    lower = segment_family_modulus(ring)
    q = ring.homogeneous_dimension
    jacobian = ring.lambda_11**q
    upper_zero = upper_volume_bound(ring, jacobian)
    table = padding_polynomials(pair, ring.lambdas, ring.widths)
    padded = padding_from_polynomials(ring, table)
    upper_padded = upper_volume_bound(padded, jacobian)
    with_padding = inclusion_check(padded, config.samples, config.seed)
    without_padding = inclusion_check(ring, config.samples, config.seed)
    bracket_escape = inclusion_check(first_layer_padding(ring, table), config.samples, config.seed)
    rescaled = segment_family_modulus(rescale_ring(ring, 2))
    rigidity = rigidity_check(pair, carnot_dilation_matrix(pair, ring.lambda_11))
    report = {
        "ring": ring.to_dict(),
        "Q": q,
        "segment_modulus": lower.to_dict(),
        "upper_zero_padding": format_exact(upper_zero),
        "bounds_equal_zero_padding": upper_zero == lower.lower_bound,
        "padding": table.to_dict(),
        "upper_padded": format_exact(upper_padded),
        "inclusion_padded": with_padding.to_dict(),
        "inclusion_zero_padding": without_padding.to_dict(),
        "inclusion_first_layer_padding": bracket_escape.to_dict(),
        "rescaled_modulus_equal": rescaled == lower,
        "rigidity": rigidity.to_dict(),
    }
    ok = (
        report["bounds_equal_zero_padding"]
        and with_padding.ok
        and not without_padding.ok
        and not bracket_escape.ok
        and report["rescaled_modulus_equal"]
        and rigidity.equality
    )
    return ok, report


def _blowup_demo(config: RunConfig) -> Tuple[bool, Report]:
    pair, doc = _pair(config)
    shear = ContactShear(pair, Fraction(1, 2))
    p = (Fraction(1), Fraction(0), Fraction(0))
    back = SimilarityElement.left_translation(pair, tuple(-c for c in p))
    scales = tuple(float(s) for s in range(1, 11))
    points = [tuple(float(c) for c in x) for x in parse_sample_points(doc, pair.dim)]
    blowup = blowup_demo(pair, shear, [back] * len(scales), scales, points)
    k_limit = dilatation(first_layer_block(pair, shear.differential(p)))

    # graded but non-orthogonal conjugator
    f = (Fraction(2), Fraction(1), Fraction(2))
    conjugator = SimilarityElement(
        pair,
        None,
        1,
        tuple(tuple(f[r] if r == c else Fraction(0) for c in range(3)) for r in range(3)),
    )
    conjugated = conjugate_map(conjugator, shear)
    exact_scales = tuple(Fraction(1, 2**k) for k in range(3, 9))
    pansu = pansu_differential(pair, conjugated, p, exact_scales)
    closed_form = conjugated.differential(p)
    pansu_error = max(
        abs(float(a - b)) for ra, rb in zip(pansu.limit, closed_form) for a, b in zip(ra, rb)
    )
    report = {
        "blowup": blowup.to_dict(),
        "k_limit": k_limit,
        "k_error": abs(blowup.k_last - k_limit),
        "k_tolerance": Tolerance.BLOWUP,
        "pansu_limit": _matrix(pansu.limit),
        "pansu_closed_form": _matrix(closed_form),
        "pansu_error": pansu_error,
        "pansu_tolerance": Tolerance.PANSU,
    }
    ok = report["k_error"] <= Tolerance.BLOWUP and pansu_error <= Tolerance.PANSU
    return ok, report


def _examples(config: RunConfig) -> Tuple[bool, Report]:
    return True, {"examples": example_index()}


COMMANDS: Dict[str, Callable[[RunConfig], Tuple[bool, Report]]] = {
    Command.VALIDATE: _validate,
    Command.ANALYZE: _analyze,
    Command.SEQUENCE: _sequence,
    Command.METRIC_CHECK: _metric_check,
    Command.CIRCUMCENTER: _circumcenter,
    Command.INVARIANT: _invariant,
    Command.ISO_AUT: _iso_aut,
    Command.COUNTEREXAMPLE: _counterexample,
    Command.MODULUS_DEMO: _modulus_demo,
    Command.BLOWUP_DEMO: _blowup_demo,
    Command.EXAMPLES: _examples,
}


def run(config: RunConfig) -> Tuple[int, Report]:
    """
    Execute one command.

    Returns:
        The exit code and the report; input errors are reported rather than raised
    """
    if config.command not in COMMANDS:
        raise ValidationError(f"unknown command '{config.command}'")
    header = {"command": config.command, "seed": config.seed}
    try:
        ok, body = COMMANDS[config.command](config)
    except CarnotConformalError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        error = f"{type(exc).__name__}: {exc}"
        return ExitCode.INPUT_ERROR, {**header, "ok": False, "error": error}
    code = ExitCode.OK if ok else ExitCode.ASSERTION_FAILED
    logger.info("%s finished with exit code %d", config.command, code)
    return code, {**header, **body, "ok": bool(ok)}


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="carnot-conformal",
        description="Lie algebra, quasi-metric, conformal structure and modulus computations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", type=Path, help="JSON input file")
    parser.add_argument("--example", help="name of a bundled example")
    parser.add_argument("--seed", type=int, default=Defaults.SEED)
    parser.add_argument("--tol", type=float, default=Defaults.TOL)
    parser.add_argument("--samples", type=int, default=Defaults.SAMPLES)
    parser.add_argument("--word-cap", dest="word_cap", type=int, default=Defaults.WORD_CAP)
    parser.add_argument("--t-range", dest="t_range", type=float, default=Defaults.T_RANGE)
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    verbosity = -1 if args.quiet else args.verbose
    level = {-1: logging.ERROR, 0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )
    if args.input is not None and args.example is not None:
        logger.error("--input and --example are mutually exclusive")
        return ExitCode.INPUT_ERROR
    config = RunConfig(
        command=args.command,
        input=args.input,
        example=args.example,
        seed=args.seed,
        tol=args.tol,
        samples=args.samples,
        word_cap=args.word_cap,
        t_range=args.t_range,
        out=args.out,
        verbosity=verbosity,
    )
    code, report = run(config)
    text = write_report(report, config.out)
    if config.out is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
