"""Step functions and the two survival functions.

Every survival function here is a right-continuous piecewise-constant
function on [0, ∞) with finitely many pieces, held in canonical form
(adjacent pieces merged).  The plain survival function of a vector under
a measure admits four equivalent constructions which are all provided and
cross-checked by the test suite; the aggregation-based generalization is
computed by a single sweep over the conditioning collection.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .aggops import Fca, agg_max
from .errors import ApproxOperatorWithoutTolerance
from .levels import LevelSystem, SortedView, level_indices, measure_level_indices, sorted_view
from .setfun import MonotoneMeasure, format_value, parse_value

__all__ = [
    "StepFn",
    "Relation",
    "StepComparison",
    "step_compare",
    "aggregation_table",
    "survival_standard",
    "SURVIVAL_METHODS",
    "gsf",
    "stepfn_to_json",
    "stepfn_from_json",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class StepFn:
    """Right-continuous step function on [0, ∞) in canonical form.

    ``values[j]`` holds on [breakpoints[j], breakpoints[j+1]); the last
    piece extends to infinity.  Breakpoints start at 0 and increase
    strictly; adjacent values differ.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) or not self.breakpoints:
            raise ValueError("breakpoints and values must be nonempty and aligned")
        if self.breakpoints[0] != 0:
            raise ValueError("the first breakpoint must be 0")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if a >= b:
                raise ValueError("breakpoints must increase strictly")
        for a, b in zip(self.values, self.values[1:]):
            if a == b:
                raise ValueError("canonical form: adjacent values must differ")

    @classmethod
    def from_steps(
        cls, pairs: Sequence[tuple[Fraction, Fraction]]
    ) -> "StepFn":
        """Build from (breakpoint, value) pairs, merging equal neighbours."""
        breakpoints: list[Fraction] = []
        values: list[Fraction] = []
        for b, v in pairs:
            if values and values[-1] == v:
                continue
            breakpoints.append(b)
            values.append(v)
        return cls(tuple(breakpoints), tuple(values))

    def __call__(self, alpha: Fraction | int | str) -> Fraction:
        a = alpha if isinstance(alpha, Fraction) else parse_value(alpha)
        if a < 0:
            raise ValueError("step functions live on [0, ∞)")
        return self.values[bisect_right(self.breakpoints, a) - 1]

    def pieces(self) -> Iterator[tuple[Fraction, Fraction | None, Fraction]]:
        """Yield (start, end, value); the final end is None for +∞."""
        for j, (b, v) in enumerate(zip(self.breakpoints, self.values)):
            end = self.breakpoints[j + 1] if j + 1 < len(self.breakpoints) else None
            yield b, end, v

    @property
    def final_value(self) -> Fraction:
        return self.values[-1]

    def is_nonincreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))


class Relation(Enum):
    EQUAL = "equal"
    LESS_EQUAL = "leq"
    GREATER_EQUAL = "geq"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class StepComparison:
    """Pointwise relation of two step functions on [0, ∞).

    The witness is the left endpoint of the first piece on which the two
    functions differ (None iff they are equal).
    """

    relation: Relation
    witness: Fraction | None = None

    @property
    def leq(self) -> bool:
        return self.relation in (Relation.EQUAL, Relation.LESS_EQUAL)

    @property
    def geq(self) -> bool:
        return self.relation in (Relation.EQUAL, Relation.GREATER_EQUAL)


def step_compare(f: StepFn, g: StepFn) -> StepComparison:
    """Exact pointwise comparison over the merged breakpoint grid."""
    grid = sorted({*f.breakpoints, *g.breakpoints})
    below = above = False
    witness: Fraction | None = None
    for alpha in grid:
        fv, gv = f(alpha), g(alpha)
        if fv != gv and witness is None:
            witness = alpha
        below |= fv < gv
        above |= fv > gv
    if below and above:
        return StepComparison(Relation.INCOMPARABLE, witness)
    if below:
        return StepComparison(Relation.LESS_EQUAL, witness)
    if above:
        return StepComparison(Relation.GREATER_EQUAL, witness)
    return StepComparison(Relation.EQUAL)


# ---------------------------------------------------------------- aggregation tables


def aggregation_table(
    fca: Fca,
    x: Sequence[Fraction],
    tolerance: Fraction | None = None,
) -> dict[int, Fraction]:
    """Exact aggregation values for every conditioning set of the family.

    Approximate operators require a tolerance: their float values are made
    exact and snapped onto the level grid of the vector whenever they land
    within the tolerance of a level, so that equality-sensitive checks see
    one consistent rational table.
    """
    exact = fca.op.exact
    if not exact and tolerance is None:
        raise ApproxOperatorWithoutTolerance(
            f"operator {fca.op.kind!r} is approximate; pass an explicit tolerance"
        )
    table: dict[int, Fraction] = {}
    anchors = sorted({ZERO, *x}) if not exact else ()
    for mask in fca.collection:
        raw = fca.aggregate(x, mask)
        if isinstance(raw, Fraction):
            table[mask] = raw
            continue
        value = Fraction(raw)
        snapped = value
        best = None
        for anchor in anchors:
            gap = abs(value - anchor)
            if best is None or gap < best:
                best, snapped = gap, anchor
        table[mask] = snapped if best is not None and best <= tolerance else value
    return table


# ---------------------------------------------------------------- survival functions


def _sweep(pairs: Sequence[tuple[Fraction, Fraction]]) -> StepFn:
    """Turn (threshold, candidate) pairs into α ↦ min{c : a ≤ α}.

    Assumes a threshold 0 is present so the function is total on [0, ∞).
    """
    steps: list[tuple[Fraction, Fraction]] = []
    best: Fraction | None = None
    for a, c in sorted(pairs):
        if best is None or c < best:
            best = c
        if steps and steps[-1][0] == a:
            steps[-1] = (a, best)
        else:
            steps.append((a, best))
    return StepFn.from_steps(steps)


def _minform(x: Sequence[Fraction], measure: MonotoneMeasure) -> StepFn:
    n = len(x)
    size = 1 << n
    maxima = [ZERO] * size
    for mask in range(1, size):
        low = mask & -mask
        rest = maxima[mask ^ low]
        xi = x[low.bit_length() - 1]
        maxima[mask] = xi if xi > rest else rest
    return _sweep([(maxima[mask], measure.table[size - 1 - mask]) for mask in range(size)])


def _sumform(x, measure, view: SortedView) -> StepFn:
    # Summands with an empty level interval contribute nothing and are skipped;
    # the first kept interval always starts at 0, and [level(n), ∞) carries 0.
    steps = []
    for i in range(view.n):
        if view.levels[i] == view.levels[i + 1]:
            continue
        steps.append((view.levels[i], measure[view.upper_set(i + 1)]))
    steps.append((view.levels[view.n], ZERO))
    return StepFn.from_steps(steps)


def _psiform(x, measure, view: SortedView, system: LevelSystem) -> StepFn:
    # The jump intervals tile [0, ∞); the jump at n contributes the final 0.
    return StepFn.from_steps(
        [(view.levels[k], measure[view.upper_set(k + 1)]) for k in system.jumps]
    )


def _psistarform(x, measure, view: SortedView, system: LevelSystem) -> StepFn:
    # The merged intervals also tile [0, ∞), each carrying the shared
    # upper-set measure of the jumps it absorbed.
    return StepFn.from_steps(
        [(view.levels[k], measure[view.upper_set(k + 1)]) for k in system.merged]
    )


SURVIVAL_METHODS = ("minform", "sumform", "psi", "psistar")


def survival_standard(
    x: Sequence[Fraction], measure: MonotoneMeasure, method: str = "psi"
) -> StepFn:
    """The survival function α ↦ measure of {x > α}, as a canonical StepFn.

    All four methods produce identical results: a minimum over the power
    set, the sorted-sum expansion, and its two compressed forms over the
    jump indices and the measure-merged jump indices.
    """
    if len(x) != measure.n:
        raise ValueError("vector length must match the measure's ground set")
    if method == "minform":
        return _minform(x, measure)
    view = sorted_view(x)
    if method == "sumform":
        return _sumform(x, measure, view)
    if method == "psi":
        return _psiform(x, measure, view, level_indices(x, view))
    if method == "psistar":
        return _psistarform(x, measure, view, measure_level_indices(x, measure, view))
    raise ValueError(f"unknown method {method!r}; pick one of {SURVIVAL_METHODS}")


def gsf(
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> StepFn:
    """The aggregation-based survival function of the family.

    α ↦ min of the complement measures over the conditioning sets whose
    aggregated value is ≤ α; total on [0, ∞) because the empty set
    aggregates to 0.
    """
    if len(x) != measure.n or fca.n != measure.n:
        raise ValueError("vector, measure, and family must share one ground set")
    table = aggregation_table(fca, x, tolerance)
    return _sweep(
        [(a, measure.complement_value(mask)) for mask, a in table.items()]
    )


# ---------------------------------------------------------------- serialization


def stepfn_to_json(fn: StepFn) -> dict:
    return {
        "breakpoints": [format_value(b) for b in fn.breakpoints],
        "values": [format_value(v) for v in fn.values],
    }


def stepfn_from_json(obj) -> StepFn:
    return StepFn.from_steps(
        list(
            zip(
                (parse_value(b) for b in obj["breakpoints"]),
                (parse_value(v) for v in obj["values"]),
            )
        )
    )
