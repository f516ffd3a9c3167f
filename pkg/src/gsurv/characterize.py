"""Deciding equality of the two survival functions across all measures.

For a fixed vector, equality for every monotone measure is decidable by a
finite profile check: the complements of the vector's upper-set chain
must belong to the collection, the operator must agree with the maximum
operator on them, and it must dominate the maximum elsewhere.  Refutations
always come with a concrete separating measure and evaluation point that
re-verify from scratch; probe-based verdicts are reported as such and
never claimed as proofs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

from .aggops import Fca, agg_max, is_nondecreasing_wrt_sets
from .errors import (
    CollectionNotPowerset,
    ConsistencyViolation,
    NotMonotoneFamily,
    ValuesNotMonotone,
)
from .levels import level_indices, sorted_view
from .setfun import (
    GroundSet,
    MonotoneMeasure,
    format_subset,
    format_value,
    format_vector,
    measure_to_json,
    parse_value,
    random_monotone_measure,
    strict_binary_measure,
    validate_measure,
)
from .survival import Relation, aggregation_table, gsf, step_compare, survival_standard

__all__ = [
    "VerdictStatus",
    "CounterexampleWitness",
    "Verdict",
    "equality_for_all_measures",
    "equality_all_measures_monotone_fca",
    "max_family_check",
    "measure_from_max_levels",
    "search_counterexample",
    "indistinguishable",
]

ZERO = Fraction(0)


class VerdictStatus(Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    PASSED_PROBES = "passed_probes"


@dataclass(frozen=True)
class CounterexampleWitness:
    """An instance (x, measure, α) separating the two survival functions."""

    x: tuple[Fraction, ...]
    measure: MonotoneMeasure
    alpha: Fraction

    def verify(self, fca: Fca, tolerance: Fraction | None = None) -> bool:
        """Recompute both functions and confirm they differ at α."""
        generalized = gsf(self.x, self.measure, fca, tolerance)
        standard = survival_standard(self.x, self.measure)
        return generalized(self.alpha) != standard(self.alpha)

    def to_json(self) -> dict:
        # keyed like the problem-input schema so witnesses paste back in
        return {
            "n": self.measure.n,
            "vector": format_vector(self.x),
            "measure": measure_to_json(self.measure),
            "alpha": format_value(self.alpha),
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a for-all-measures (or for-all-vectors) question.

    ``probes`` counts sampled instances for probe-limited verdicts; a
    refutation always carries a re-verifiable witness.
    """

    status: VerdictStatus
    witness: CounterexampleWitness | None = None
    probes: int = 0
    reason: str = ""

    @property
    def proved(self) -> bool:
        return self.status is VerdictStatus.PROVED

    @property
    def refuted(self) -> bool:
        return self.status is VerdictStatus.REFUTED

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "probes": self.probes,
            "reason": self.reason,
        }


def _chain_complements(x: Sequence[Fraction]) -> frozenset[int]:
    view = sorted_view(x)
    full = (1 << view.n) - 1
    return frozenset(
        full ^ view.upper_set(k + 1) for k in level_indices(x, view).jumps
    )


def _descending_chain_measure(x: Sequence[Fraction]) -> MonotoneMeasure | None:
    """A measure, injective on the chain, built from strictly decreasing levels."""
    jumps = level_indices(x).jumps
    count = len(jumps)
    if count < 2:
        return None
    values = {
        k: Fraction(count - 1 - j, count - 1) for j, k in enumerate(jumps)
    }
    return measure_from_max_levels(x, values, strict=True)


def _find_witness(
    x: tuple[Fraction, ...], fca: Fca, tolerance: Fraction | None
) -> CounterexampleWitness:
    candidates = [strict_binary_measure(fca.n)]
    descending = _descending_chain_measure(x)
    if descending is not None:
        candidates.append(descending)
    for measure in candidates:
        comparison = step_compare(
            gsf(x, measure, fca, tolerance), survival_standard(x, measure)
        )
        if comparison.relation is not Relation.EQUAL:
            return CounterexampleWitness(x, measure, comparison.witness)
    raise ConsistencyViolation(
        "equality profile refuted but no probe measure separates the functions"
    )


def equality_for_all_measures(
    x: Sequence[Fraction], fca: Fca, tolerance: Fraction | None = None
) -> Verdict:
    """Decide whether both survival functions agree for every monotone measure.

    Proved iff the chain complements of the vector lie in the collection,
    the operator equals the maximum on them, and dominates the maximum on
    the rest of the collection; refutations carry a separating measure.
    """
    x = tuple(x)
    aggs = aggregation_table(fca, x, tolerance)
    chain = _chain_complements(x)
    reason = None
    missing = sorted(chain - fca.collection)
    if missing:
        reason = f"collection misses the chain complement {format_subset(missing[0])}"
    else:
        for mask in sorted(fca.collection):
            value = aggs[mask]
            top = agg_max(x, mask)
            if mask in chain:
                if value != top:
                    reason = (
                        f"operator deviates from max on the chain complement "
                        f"{format_subset(mask)}: {value} != {top}"
                    )
                    break
            elif value < top:
                reason = (
                    f"operator drops below max on {format_subset(mask)}: "
                    f"{value} < {top}"
                )
                break
    if reason is None:
        return Verdict(
            VerdictStatus.PROVED,
            reason="operator matches max on the chain complements and dominates it elsewhere",
        )
    return Verdict(
        VerdictStatus.REFUTED, witness=_find_witness(x, fca, tolerance), reason=reason
    )


def equality_all_measures_monotone_fca(
    x: Sequence[Fraction],
    fca: Fca,
    probes: Sequence[Sequence[Fraction]] | None = None,
    tolerance: Fraction | None = None,
) -> Verdict:
    """The same question for a family nondecreasing with respect to sets.

    For such families, equality for every measure forces the operator to
    coincide with the maximum on the whole collection; the verdict is
    cross-checked against :func:`equality_for_all_measures`.
    """
    x = tuple(x)
    monotone = is_nondecreasing_wrt_sets(fca, probes if probes is not None else (x,))
    if not monotone.passed:
        raise NotMonotoneFamily(f"family is not nondecreasing: {monotone.witness}")
    aggs = aggregation_table(fca, x, tolerance)
    chain = _chain_complements(x)
    coincides = chain <= fca.collection and all(
        aggs[mask] == agg_max(x, mask) for mask in fca.collection
    )
    base = equality_for_all_measures(x, fca, tolerance)
    if coincides != base.proved:
        raise ConsistencyViolation(
            "monotone-family criterion disagrees with the general criterion; "
            "the family may not actually be nondecreasing"
        )
    if coincides:
        return Verdict(
            VerdictStatus.PROVED,
            reason="operator coincides with max on every set of the collection",
        )
    return base


def max_family_check(
    fca: Fca,
    probe_values: Sequence[Fraction | str | int],
    budget: int = 10_000,
    tolerance: Fraction | None = None,
) -> Verdict:
    """Is the family the maximum family on the full power set?

    Only that family makes the two survival functions agree for every
    measure and every vector.  Built-in operators that are the maximum by
    construction are proved symbolically; everything else is probed with
    vectors that make each conditioning set a chain complement, so a
    refutation is definitive while a pass is sampling-limited.
    """
    if not fca.is_powerset:
        raise CollectionNotPowerset(
            "the max-family characterization requires the full power set"
        )
    if fca.op.max_equivalent:
        return Verdict(
            VerdictStatus.PROVED,
            reason="operator is the maximum operator on every conditioning set",
        )
    values = sorted({parse_value(v) for v in probe_values})
    if not values:
        raise ValueError("probe_values must be nonempty")
    n = fca.n
    probes = 0
    for mask in sorted(range(1, 1 << n), key=lambda m: (m.bit_count(), m)):
        positions = [i for i in range(n) if mask >> i & 1]
        for combo in product(values, repeat=len(positions)):
            if probes >= budget:
                return Verdict(VerdictStatus.PASSED_PROBES, probes=probes)
            probes += 1
            bump = max(combo) + 1
            probe_x = tuple(
                combo[positions.index(i)] if mask >> i & 1 else bump
                for i in range(n)
            )
            value = aggregation_table(fca, probe_x, tolerance)[mask]
            if value != agg_max(probe_x, mask):
                inner = equality_for_all_measures(probe_x, fca, tolerance)
                return Verdict(
                    VerdictStatus.REFUTED,
                    witness=inner.witness,
                    probes=probes,
                    reason=(
                        f"operator differs from max on {format_subset(mask)} "
                        f"for the probe vector {format_vector(probe_x)}"
                    ),
                )
    return Verdict(VerdictStatus.PASSED_PROBES, probes=probes)


def measure_from_max_levels(
    x: Sequence[Fraction],
    chain_values: Mapping[int, Fraction | str | int],
    strict: bool = False,
) -> MonotoneMeasure:
    """Extend a value assignment on the upper-set chain to a full measure.

    Every subset inherits the value assigned to the jump index whose level
    equals the maximum of the vector over the subset's complement.  The
    assignment must be keyed exactly by the jump indices, nonincreasing
    (strictly decreasing if requested), and 0 at the top index.
    """
    x = tuple(x)
    view = sorted_view(x)
    jumps = level_indices(x, view).jumps
    values = {int(k): parse_value(v) for k, v in chain_values.items()}
    if set(values) != set(jumps):
        raise ValueError(
            f"chain values must be keyed by the jump indices {list(jumps)}, "
            f"got {sorted(values)}"
        )
    ordered = [values[k] for k in jumps]
    for a, b in zip(ordered, ordered[1:]):
        if a < b or (strict and a == b):
            raise ValuesNotMonotone(
                f"chain values must be {'strictly decreasing' if strict else 'nonincreasing'}: "
                f"{format_value(a)} before {format_value(b)}"
            )
    if ordered[-1] != 0:
        raise ValuesNotMonotone("the value at the top jump index must be 0")
    level_to_jump = {view.levels[k]: k for k in jumps}
    n = view.n
    full = (1 << n) - 1
    table = [
        values[level_to_jump[agg_max(x, full ^ mask)]] for mask in range(1 << n)
    ]
    return validate_measure(table, n)


def search_counterexample(
    fca: Fca,
    n: GroundSet | int,
    vector_grid: Sequence[Fraction | str | int],
    measure_grid: Sequence[Fraction | str | int],
    budget: int = 10_000,
    seed: int = 0,
    measure_factory: Callable[[int], MonotoneMeasure] | None = None,
    tolerance: Fraction | None = None,
) -> Verdict:
    """Hunt for an instance separating the two survival functions.

    Vectors run exhaustively over the grid when that space fits the
    budget, otherwise they are sampled; measures are drawn per instance
    from seeded monotone-repair generation (or the supplied factory).
    Deterministic in the seed; the first witness found is returned.
    """
    ground = n if isinstance(n, GroundSet) else GroundSet(n)
    if budget <= 0:
        raise ValueError("budget must be positive")
    values = tuple(sorted({parse_value(v) for v in vector_grid}))
    if not values:
        raise ValueError("vector_grid must be nonempty")
    space = len(values) ** ground.n
    vectors = (
        list(product(values, repeat=ground.n)) if space <= budget else None
    )
    rng = random.Random(seed)
    checked = 0
    while checked < budget:
        if vectors is not None:
            xvec = vectors[checked % len(vectors)]
        else:
            xvec = tuple(rng.choice(values) for _ in range(ground.n))
        instance_seed = seed * 1_000_003 + checked
        if measure_factory is not None:
            measure = measure_factory(instance_seed)
        else:
            measure = random_monotone_measure(ground, instance_seed, measure_grid)
        checked += 1
        comparison = step_compare(
            gsf(xvec, measure, fca, tolerance), survival_standard(xvec, measure)
        )
        if comparison.relation is not Relation.EQUAL:
            return Verdict(
                VerdictStatus.REFUTED,
                witness=CounterexampleWitness(xvec, measure, comparison.witness),
                probes=checked,
                reason="survival functions differ on the witness instance",
            )
    return Verdict(VerdictStatus.PASSED_PROBES, probes=checked)


def indistinguishable(
    x: Sequence[Fraction],
    y: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> bool:
    """True iff the two vectors have identical generalized survival functions."""
    return gsf(tuple(x), measure, fca, tolerance) == gsf(
        tuple(y), measure, fca, tolerance
    )
