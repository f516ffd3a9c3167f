"""Command line surface: problem ingestion, reports, and figure emission.

Problems are JSON documents naming a ground set size, an input vector, one
or two measures, and an operator family.  Every subcommand emits a JSON
payload (to --output or stdout) and, where asked, SVG figures; outputs are
byte-identical across repeated runs.  Exit codes: 0 for affirmative
verdicts, 1 for refuted/unequal verdicts, 2 for input or usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .aggops import (
    Fca,
    MaxOperator,
    SumOperator,
    collection_from_json,
    collection_to_json,
    operator_from_json,
    operator_to_json,
)
from .characterize import (
    Verdict,
    VerdictStatus,
    equality_all_measures_monotone_fca,
    equality_for_all_measures,
    max_family_check,
    search_counterexample,
)
from .conditions import (
    ComparisonVerdict,
    ConditionKind,
    check_condition,
    compare_survival,
    condition_lattice_check,
)
from .errors import GsurvError, ParseError
from .plotting import diagram_model, render_parallel_svg, render_step_svg
from .setfun import (
    MonotoneMeasure,
    format_subset,
    format_value,
    format_vector,
    measure_from_json,
    measure_to_json,
    parse_value,
    parse_vector,
)
from .survival import SURVIVAL_METHODS, Relation, gsf, stepfn_to_json, survival_standard

__all__ = ["ProblemSpec", "load_problem", "emit_problem", "main"]

_DEFAULT_VECTOR_GRID = ("0", "1", "2", "3")
_DEFAULT_MEASURE_GRID = ("0", "0.5", "1")


@dataclass(frozen=True)
class ProblemSpec:
    """A fully validated problem instance."""

    n: int
    x: tuple[Fraction, ...]
    measure: MonotoneMeasure
    measure2: MonotoneMeasure | None
    fca: Fca
    tolerance: Fraction | None
    seed: int
    budget: int
    vector_grid: tuple[Fraction, ...]
    measure_grid: tuple[Fraction, ...]


def load_problem(source) -> ProblemSpec:
    """Load and validate a problem from a path, file object, or JSON text."""
    if hasattr(source, "read"):
        text = source.read()
        origin = "<stream>"
    else:
        path = Path(source)
        text = path.read_text()
        origin = str(path)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{origin}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(payload, Mapping):
        raise ParseError(f"{origin}: problem must be a JSON object")
    try:
        n = int(payload["n"])
        x = parse_vector(payload["vector"], n)
        measure = measure_from_json(payload["measure"], n)
    except KeyError as exc:
        raise ParseError(f"{origin}: missing required field {exc.args[0]!r}") from exc
    measure2 = (
        measure_from_json(payload["measure2"], n) if "measure2" in payload else None
    )
    operator = operator_from_json(payload.get("operator", {"kind": "max"}), n)
    collection = collection_from_json(payload.get("collection", "powerset"), n, x)
    if 0 not in collection:
        collection = collection | {0}
    fca = Fca(operator, frozenset(collection), n)
    options = payload.get("options", {})
    tolerance = (
        parse_value(options["tolerance"]) if "tolerance" in options else None
    )
    return ProblemSpec(
        n=n,
        x=x,
        measure=measure,
        measure2=measure2,
        fca=fca,
        tolerance=tolerance,
        seed=int(options.get("seed", 0)),
        budget=int(options.get("budget", 10_000)),
        vector_grid=parse_vector(options.get("vector_grid", _DEFAULT_VECTOR_GRID)),
        measure_grid=parse_vector(options.get("measure_grid", _DEFAULT_MEASURE_GRID)),
    )


def emit_problem(spec: ProblemSpec) -> dict:
    """Serialize a problem back to its JSON form (round-trips exactly)."""
    payload: dict = {
        "n": spec.n,
        "vector": format_vector(spec.x),
        "measure": measure_to_json(spec.measure),
    }
    if spec.measure2 is not None:
        payload["measure2"] = measure_to_json(spec.measure2)
    payload["operator"] = operator_to_json(spec.fca.op)
    payload["collection"] = collection_to_json(spec.fca.collection, spec.n)
    options: dict = {
        "seed": spec.seed,
        "budget": spec.budget,
        "vector_grid": format_vector(spec.vector_grid),
        "measure_grid": format_vector(spec.measure_grid),
    }
    if spec.tolerance is not None:
        options["tolerance"] = format_value(spec.tolerance)
    payload["options"] = options
    return payload


# ---------------------------------------------------------------- helpers


def _spec(args) -> ProblemSpec:
    if not getattr(args, "input", None):
        raise ParseError("this command needs --input")
    spec = load_problem(args.input)
    if args.tolerance is not None:
        spec = replace(spec, tolerance=parse_value(args.tolerance))
    return spec


def _write_svg(args, content: bytes) -> None:
    if getattr(args, "svg", None):
        Path(args.svg).write_bytes(content)


def _verdict_exit(verdict: Verdict) -> int:
    return 1 if verdict.status is VerdictStatus.REFUTED else 0


def _comparison_payload(verdict: ComparisonVerdict) -> dict:
    return verdict.to_json()


# ---------------------------------------------------------------- commands


def _cmd_survival(args):
    spec = _spec(args)
    fn = survival_standard(spec.x, spec.measure, args.method)
    _write_svg(args, render_step_svg(fn, labels=("standard", "")))
    return 0, {"survival": stepfn_to_json(fn)}, []


def _cmd_gsf(args):
    spec = _spec(args)
    fn = gsf(spec.x, spec.measure, spec.fca, spec.tolerance)
    _write_svg(args, render_step_svg(fn, labels=("generalized", "")))
    return 0, {"gsf": stepfn_to_json(fn)}, []


def _cmd_compare(args):
    spec = _spec(args)
    primary = compare_survival(spec.x, spec.measure, spec.fca, spec.tolerance)
    payload = {"primary": _comparison_payload(primary)}
    human = [f"primary: {primary.relation.value}"]
    equal = primary.relation is Relation.EQUAL
    if spec.measure2 is not None:
        secondary = compare_survival(spec.x, spec.measure2, spec.fca, spec.tolerance)
        payload["secondary"] = _comparison_payload(secondary)
        human.append(f"secondary: {secondary.relation.value}")
        equal = equal and secondary.relation is Relation.EQUAL
    _write_svg(
        args, render_step_svg(primary.generalized, primary.standard)
    )
    return (0 if equal else 1), payload, human


def _cmd_check(args):
    spec = _spec(args)
    if args.conditions:
        try:
            kinds = [ConditionKind(tag.strip()) for tag in args.conditions.split(",")]
        except ValueError as exc:
            raise ParseError(f"unknown condition tag in {args.conditions!r}") from exc
    else:
        kinds = list(ConditionKind)
    reports = [
        check_condition(kind, spec.x, spec.measure, spec.fca, spec.tolerance)
        for kind in kinds
    ]
    human = [
        f"{report.kind.value:<4} {'holds' if report.holds else 'fails'}"
        for report in reports
    ]
    payload = {"reports": [report.to_json() for report in reports]}
    return (0 if all(r.holds for r in reports) else 1), payload, human


def _cmd_lattice(args):
    spec = _spec(args)
    report = condition_lattice_check(spec.x, spec.measure, spec.fca, spec.tolerance)
    human = [f"relation: {report.verdict.relation.value}"]
    human += [
        f"{row.row_id:<28} {'ok' if row.ok else 'VIOLATED'}" for row in report.rows
    ]
    return 0, report.to_json(), human


def _cmd_characterize(args):
    spec = _spec(args)
    verdict = equality_for_all_measures(spec.x, spec.fca, spec.tolerance)
    payload = {"for_all_measures": verdict.to_json()}
    if spec.fca.op.monotone_in_sets:
        strong = equality_all_measures_monotone_fca(
            spec.x, spec.fca, tolerance=spec.tolerance
        )
        payload["monotone_family"] = strong.to_json()
    return _verdict_exit(verdict), payload, [f"verdict: {verdict.status.value}"]


def _cmd_maxfamily(args):
    spec = _spec(args)
    budget = args.budget if args.budget is not None else spec.budget
    verdict = max_family_check(
        spec.fca, spec.vector_grid, budget=budget, tolerance=spec.tolerance
    )
    return (
        _verdict_exit(verdict),
        {"max_family": verdict.to_json()},
        [f"verdict: {verdict.status.value}"],
    )


def _cmd_search(args):
    if args.input:
        spec = _spec(args)
        fca, n = spec.fca, spec.n
        vector_grid, measure_grid = spec.vector_grid, spec.measure_grid
        seed = args.seed if args.seed is not None else spec.seed
        budget = args.budget if args.budget is not None else spec.budget
        tolerance = spec.tolerance
    else:
        if args.n is None or args.op is None:
            raise ParseError("search needs either --input or both --op and --n")
        n = args.n
        operator = {"max": MaxOperator, "sum": SumOperator}[args.op]()
        fca = Fca.powerset(operator, n)
        vector_grid = parse_vector(_DEFAULT_VECTOR_GRID)
        measure_grid = parse_vector(_DEFAULT_MEASURE_GRID)
        seed = args.seed if args.seed is not None else 0
        budget = args.budget if args.budget is not None else 10_000
        tolerance = None
    verdict = search_counterexample(
        fca,
        n,
        vector_grid,
        measure_grid,
        budget=budget,
        seed=seed,
        tolerance=tolerance,
    )
    human = [f"verdict: {verdict.status.value} after {verdict.probes} instances"]
    if verdict.witness is not None:
        human.append(f"witness vector = {verdict.witness.to_json()['vector']}")
    return _verdict_exit(verdict), {"search": verdict.to_json()}, human


def _cmd_diagram(args):
    spec = _spec(args)
    model = diagram_model(spec.x, spec.measure, spec.fca, spec.tolerance)
    _write_svg(args, render_parallel_svg(model))
    payload = {
        "rows": [
            {
                "set": format_subset(mask),
                "aggregated": format_value(lower),
                "complement_measure": format_value(upper),
            }
            for mask, lower, upper in model.rows
        ]
    }
    return 0, payload, []


def _cmd_plot(args):
    spec = _spec(args)
    standard = survival_standard(spec.x, spec.measure, args.method)
    if args.what == "survival":
        svg = render_step_svg(standard, labels=("standard", ""))
        payload = {"survival": stepfn_to_json(standard)}
    else:
        generalized = gsf(spec.x, spec.measure, spec.fca, spec.tolerance)
        if args.what == "gsf":
            svg = render_step_svg(generalized, labels=("generalized", ""))
            payload = {"gsf": stepfn_to_json(generalized)}
        else:
            svg = render_step_svg(generalized, standard)
            payload = {
                "gsf": stepfn_to_json(generalized),
                "survival": stepfn_to_json(standard),
            }
    _write_svg(args, svg)
    return 0, payload, []


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="survive",
        description="survival functions vs aggregation-based survival functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, svg=False, svg_required=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="problem JSON file")
        p.add_argument("--output", help="write the JSON payload here instead of stdout")
        p.add_argument("--tolerance", help="comparison tolerance for approximate operators")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument(
            "--method",
            choices=SURVIVAL_METHODS,
            default="psi",
            help="construction to use for the standard survival function",
        )
        if svg:
            p.add_argument("--svg", required=svg_required, help="render a figure here")
        p.set_defaults(handler=handler)
        return p

    add("survival", _cmd_survival, "standard survival function", svg=True)
    add("gsf", _cmd_gsf, "generalized survival function", svg=True)
    add("compare", _cmd_compare, "pointwise comparison with certificate", svg=True)
    check = add("check", _cmd_check, "evaluate selected conditions")
    check.add_argument(
        "--conditions", help="comma-separated tags, e.g. C1,C2s,Ct3 (default: all)"
    )
    add("lattice", _cmd_lattice, "full condition table with relationship rows")
    add("characterize", _cmd_characterize, "equality for every measure, fixed vector")
    add("maxfamily", _cmd_maxfamily, "is this the max family on the power set?")
    search = add("search", _cmd_search, "hunt for a separating instance")
    search.add_argument("--op", choices=["max", "sum"], help="operator for ad-hoc search")
    search.add_argument("--n", type=int, help="ground set size for ad-hoc search")
    add("diagram", _cmd_diagram, "parallel-axes linkage diagram", svg=True, svg_required=True)
    plot = add("plot", _cmd_plot, "step plot of the survival function(s)", svg=True, svg_required=True)
    plot.add_argument("--what", choices=["both", "gsf", "survival"], default="both")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        code, payload, human = args.handler(args)
    except GsurvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
        for line in human:
            print(line)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
