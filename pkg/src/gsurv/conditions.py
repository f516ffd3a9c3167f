"""The condition calculus relating the two survival functions.

Eleven conditions are checked with witnesses: four over the jump indices
(C1–C4), their starred variants over the measure-merged jump indices
(C1s–C4s), and three tilde variants quantifying over every rank 0..n
(Ct1–Ct3).  Existential conditions ask for a conditioning set whose
aggregated value and complement measure meet the level and upper-set
measure at an index; the universal ones bound the complement measure of
every set aggregating below the next level.

Each proved implication or equivalence between a condition and the
pointwise order of the two survival functions is re-asserted on every
call; a failure is reported as a hard error because it can only mean an
implementation bug.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .aggops import Fca
from .errors import ConsistencyViolation, LatticeViolation
from .levels import measure_level_indices, sorted_view
from .setfun import (
    MonotoneMeasure,
    format_subset,
    format_value,
    is_strictly_monotone_on,
)
from .survival import Relation, StepFn, aggregation_table, gsf, step_compare, stepfn_to_json, survival_standard

__all__ = [
    "ConditionKind",
    "ConditionReport",
    "check_condition",
    "ComparisonVerdict",
    "compare_survival",
    "LatticeRow",
    "LatticeReport",
    "condition_lattice_check",
]


class ConditionKind(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C1s = "C1s"
    C2s = "C2s"
    C3s = "C3s"
    C4s = "C4s"
    Ct1 = "Ct1"
    Ct2 = "Ct2"
    Ct3 = "Ct3"


_UNIVERSAL = {ConditionKind.C2, ConditionKind.C2s, ConditionKind.Ct2}
_EXACT_VALUE = {ConditionKind.C1, ConditionKind.C1s, ConditionKind.Ct1}
_EXACT_MEASURE = _EXACT_VALUE | {ConditionKind.C4, ConditionKind.C4s}


@dataclass(frozen=True)
class ConditionReport:
    """Verdict for one condition on one instance.

    Existential kinds carry one witness set per index when they hold and
    the first failing index otherwise; universal kinds carry the violating
    (index, set) pair when they fail.
    """

    kind: ConditionKind
    holds: bool
    witnesses: Mapping[int, int]
    violation: tuple[int, int | None] | None

    def to_json(self) -> dict:
        payload: dict = {"kind": self.kind.value, "holds": self.holds}
        if self.holds and self.witnesses:
            payload["witnesses"] = {
                str(k): format_subset(e) for k, e in sorted(self.witnesses.items())
            }
        if not self.holds and self.violation is not None:
            k, e = self.violation
            payload["violation"] = {
                "k": k,
                "E": format_subset(e) if e is not None else None,
            }
        return payload


class _Instance:
    """Shared per-call caches: sorted view, index systems, aggregation table."""

    def __init__(self, x, measure: MonotoneMeasure, fca: Fca, tolerance=None):
        self.x = tuple(x)
        self.measure = measure
        self.fca = fca
        self.tolerance = tolerance
        self.view = sorted_view(self.x)
        self.system = measure_level_indices(self.x, measure, self.view)
        self.aggs = aggregation_table(fca, self.x, tolerance)
        self.sets = sorted(fca.collection)

    def level(self, k: int) -> Fraction | None:
        return self.view.level(k)

    def chain_measure(self, k: int) -> Fraction:
        return self.measure[self.view.upper_set(k + 1)]

    def index_set(self, kind: ConditionKind) -> Sequence[int]:
        tag = kind.value
        if tag.startswith("Ct"):
            return range(self.view.n + 1)
        if tag.endswith("s"):
            return self.system.merged
        return self.system.jumps


def _evaluate(inst: _Instance, kind: ConditionKind) -> ConditionReport:
    if kind in _UNIVERSAL:
        for k in inst.index_set(kind):
            bound_rank = (
                inst.system.merge_end[k] + 1 if kind is ConditionKind.C2s else k + 1
            )
            bound = inst.level(bound_rank)
            floor = inst.chain_measure(bound_rank - 1)
            for e in inst.sets:
                if bound is not None and inst.aggs[e] >= bound:
                    continue
                if inst.measure.complement_value(e) < floor:
                    return ConditionReport(kind, False, {}, (k, e))
        return ConditionReport(kind, True, {}, None)

    witnesses: dict[int, int] = {}
    for k in inst.index_set(kind):
        target = inst.level(k)
        goal = inst.chain_measure(k)
        found = None
        for e in inst.sets:
            value = inst.aggs[e]
            if kind in _EXACT_VALUE:
                if value != target:
                    continue
            elif value > target:
                continue
            complement = inst.measure.complement_value(e)
            if kind in _EXACT_MEASURE:
                if complement != goal:
                    continue
            elif complement > goal:
                continue
            found = e
            break
        if found is None:
            return ConditionReport(kind, False, {}, (k, None))
        witnesses[k] = found
    return ConditionReport(kind, True, witnesses, None)


def check_condition(
    kind: ConditionKind | str,
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> ConditionReport:
    """Exhaustively check one condition over its index set and the collection.

    Existential witnesses are the smallest-bitmask qualifying sets, so
    reports are reproducible.
    """
    kind = ConditionKind(kind)
    return _evaluate(_Instance(x, measure, fca, tolerance), kind)


# ---------------------------------------------------------------- lattice rows


@dataclass(frozen=True)
class LatticeRow:
    row_id: str
    description: str
    ok: bool


def _row(row_id: str, description: str, ok: bool) -> LatticeRow:
    return LatticeRow(row_id, description, bool(ok))


def _relation_rows(
    c: Mapping[ConditionKind, bool], relation: Relation, strict_chain: bool
) -> list[LatticeRow]:
    K = ConditionKind
    eq = relation is Relation.EQUAL
    leq = relation in (Relation.EQUAL, Relation.LESS_EQUAL)
    geq = relation in (Relation.EQUAL, Relation.GREATER_EQUAL)
    rows = [
        _row("C2<=>geq", "C2 iff generalized ≥ standard", c[K.C2] == geq),
        _row("C2s<=>geq", "C2s iff generalized ≥ standard", c[K.C2s] == geq),
        _row("Ct2<=>geq", "Ct2 iff generalized ≥ standard", c[K.Ct2] == geq),
        _row("C3<=>leq", "C3 iff generalized ≤ standard", c[K.C3] == leq),
        _row("C3s<=>leq", "C3s iff generalized ≤ standard", c[K.C3s] == leq),
        _row("C1=>leq", "C1 implies generalized ≤ standard", not c[K.C1] or leq),
        _row("C1s=>leq", "C1s implies generalized ≤ standard", not c[K.C1s] or leq),
        _row("Ct1=>leq", "Ct1 implies generalized ≤ standard", not c[K.Ct1] or leq),
        _row("C1&C2=>eq", "C1 with C2 implies equality", not (c[K.C1] and c[K.C2]) or eq),
        _row(
            "Ct1&Ct2=>eq",
            "Ct1 with Ct2 implies equality",
            not (c[K.Ct1] and c[K.Ct2]) or eq,
        ),
        _row("C2&C3<=>eq", "C2 with C3 iff equality", (c[K.C2] and c[K.C3]) == eq),
        _row("C2&C4<=>eq", "C2 with C4 iff equality", (c[K.C2] and c[K.C4]) == eq),
        _row(
            "C2s&C3s<=>eq", "C2s with C3s iff equality", (c[K.C2s] and c[K.C3s]) == eq
        ),
        _row(
            "C2s&C4s<=>eq", "C2s with C4s iff equality", (c[K.C2s] and c[K.C4s]) == eq
        ),
        _row(
            "C1s&C2s<=>eq", "C1s with C2s iff equality", (c[K.C1s] and c[K.C2s]) == eq
        ),
        _row(
            "Ct2&Ct3<=>eq", "Ct2 with Ct3 iff equality", (c[K.Ct2] and c[K.Ct3]) == eq
        ),
    ]
    if strict_chain:
        rows.append(
            _row(
                "strict-chain:C1&C2<=>eq",
                "with the measure injective on the upper-set chain, C1 with C2 iff equality",
                (c[K.C1] and c[K.C2]) == eq,
            )
        )
    return rows


def _condition_rows(c: Mapping[ConditionKind, bool]) -> list[LatticeRow]:
    K = ConditionKind
    rows = [
        _row("C2<=>C2s", "C2 iff C2s", c[K.C2] == c[K.C2s]),
        _row("C4=>C3", "C4 implies C3", not c[K.C4] or c[K.C3]),
        _row("C4s=>C3s", "C4s implies C3s", not c[K.C4s] or c[K.C3s]),
        _row("Ct1=>C1", "Ct1 implies C1", not c[K.Ct1] or c[K.C1]),
        _row("Ct2=>C2", "Ct2 implies C2", not c[K.Ct2] or c[K.C2]),
        _row("Ct3=>C3", "Ct3 implies C3", not c[K.Ct3] or c[K.C3]),
    ]
    if c[K.C2s]:
        rows.append(
            _row(
                "under-C2s:C1s<=>C3s<=>C4s",
                "assuming C2s, the starred existential conditions coincide",
                c[K.C1s] == c[K.C3s] and c[K.C3s] == c[K.C4s],
            )
        )
    if c[K.C1] and c[K.C2]:
        conjunctions = [
            c[K.C1s] and c[K.C2s],
            c[K.C2] and c[K.C3],
            c[K.C2] and c[K.C4],
            c[K.Ct2] and c[K.Ct3],
            c[K.C2s] and c[K.C3s],
            c[K.C2s] and c[K.C4s],
            c[K.C1s] and c[K.C2],
        ]
        rows.append(
            _row(
                "under-C1&C2:equivalents",
                "assuming C1 with C2, every equality-equivalent conjunction holds",
                all(conjunctions),
            )
        )
    return rows


# ---------------------------------------------------------------- comparison


@dataclass(frozen=True)
class ComparisonVerdict:
    """Pointwise relation of the two survival functions with its certificate.

    The certificate is the full condition truth table; construction fails
    with :class:`ConsistencyViolation` if any proved direction between the
    table and the computed relation does not hold.
    """

    relation: Relation
    witness: Fraction | None
    conditions: Mapping[ConditionKind, bool]
    generalized: StepFn
    standard: StepFn
    strict_chain: bool

    def to_json(self) -> dict:
        return {
            "relation": self.relation.value,
            "witness": None if self.witness is None else format_value(self.witness),
            "conditions": {k.value: v for k, v in self.conditions.items()},
            "generalized": stepfn_to_json(self.generalized),
            "standard": stepfn_to_json(self.standard),
        }


def _build(inst: _Instance) -> tuple[ComparisonVerdict, list[LatticeRow]]:
    generalized = gsf(inst.x, inst.measure, inst.fca, inst.tolerance)
    standard = survival_standard(inst.x, inst.measure)
    comparison = step_compare(generalized, standard)
    conditions = {kind: _evaluate(inst, kind).holds for kind in ConditionKind}
    chain = {inst.view.upper_set(k + 1) for k in inst.system.jumps}
    strict_chain = is_strictly_monotone_on(inst.measure, chain)
    rows = _relation_rows(conditions, comparison.relation, strict_chain)
    verdict = ComparisonVerdict(
        comparison.relation,
        comparison.witness,
        conditions,
        generalized,
        standard,
        strict_chain,
    )
    return verdict, rows


def compare_survival(
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> ComparisonVerdict:
    """Compare the two survival functions and certify the verdict.

    The pointwise relation from the step functions must agree with the
    relation implied by the condition checkers in every proved direction.
    """
    verdict, rows = _build(_Instance(x, measure, fca, tolerance))
    failed = [row for row in rows if not row.ok]
    if failed:
        raise ConsistencyViolation(
            "condition/relation cross-check failed: "
            + "; ".join(row.row_id for row in failed)
        )
    return verdict


@dataclass(frozen=True)
class LatticeReport:
    """Full condition truth table plus every asserted relationship row."""

    verdict: ComparisonVerdict
    rows: tuple[LatticeRow, ...]

    @property
    def conditions(self) -> Mapping[ConditionKind, bool]:
        return self.verdict.conditions

    def to_json(self) -> dict:
        return {
            "relation": self.verdict.relation.value,
            "conditions": {k.value: v for k, v in self.conditions.items()},
            "rows": [
                {"id": row.row_id, "description": row.description, "ok": row.ok}
                for row in self.rows
            ],
        }


def condition_lattice_check(
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> LatticeReport:
    """Evaluate all conditions and assert every relationship row.

    Rows cover both condition-versus-order directions and the
    condition-versus-condition implications; any failed row raises
    :class:`LatticeViolation`.
    """
    verdict, rows = _build(_Instance(x, measure, fca, tolerance))
    rows = rows + _condition_rows(verdict.conditions)
    failed = [row for row in rows if not row.ok]
    if failed:
        raise LatticeViolation(failed)
    return LatticeReport(verdict, tuple(rows))
