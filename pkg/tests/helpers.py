"""Shared test data and independent oracles.

The oracles here deliberately avoid the library's sweep implementations:
they evaluate definitions pointwise so the fast paths have something
honest to be compared against.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import gsurv

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Measure tables keyed by subset, n = 3 throughout.
TABLE1 = {
    "{}": "0", "{1}": "0.25", "{2}": "0.25", "{3}": "0.4",
    "{1,2}": "0.75", "{1,3}": "0.75", "{2,3}": "0.75", "{1,2,3}": "1",
}
SC_MEASURE = {
    "{}": "0", "{1}": "0", "{2}": "0.5", "{3}": "0",
    "{1,2}": "0.5", "{1,3}": "0", "{2,3}": "0.7", "{1,2,3}": "1",
}
EXAMPLE_MEASURE = {
    "{}": "0", "{1}": "0", "{2}": "0", "{3}": "0.7",
    "{1,2}": "0", "{1,3}": "0.8", "{2,3}": "0.7", "{1,2,3}": "1",
}
EX_MAIN_MU = {
    "{}": "0", "{1}": "0", "{2}": "0", "{3}": "0",
    "{1,2}": "0", "{1,3}": "0.5", "{2,3}": "0.5", "{1,2,3}": "1",
}
EX_MAIN_NU = {
    "{}": "0", "{1}": "0", "{2}": "0", "{3}": "0",
    "{1,2}": "0.5", "{1,3}": "0.5", "{2,3}": "0.5", "{1,2,3}": "1",
}
LM_MEASURE = {
    "{}": "0", "{1}": "0", "{2}": "0.5", "{3}": "0",
    "{1,2}": "0.5", "{1,3}": "0.5", "{2,3}": "0.5", "{1,2,3}": "1",
}

WEIGHTED_W = ("0.5", "0.5", "1")
WEIGHTED_Z = ("0.5", "0.25", "1")


def measure3(table: dict) -> gsurv.MonotoneMeasure:
    return gsurv.measure_from_json(table, 3)


def vec(*components) -> tuple[Fraction, ...]:
    return gsurv.parse_vector([str(c) for c in components])


def weighted_operator() -> gsurv.WeightedMaxOperator:
    return gsurv.WeightedMaxOperator(
        tuple(Fraction(w) for w in WEIGHTED_W),
        tuple(Fraction(z) for z in WEIGHTED_Z),
    )


def steps_of(fn: gsurv.StepFn) -> list[tuple[str, str]]:
    return [
        (gsurv.format_value(b), gsurv.format_value(v))
        for b, v in zip(fn.breakpoints, fn.values)
    ]


def survival_pointwise(x, measure, alpha: Fraction) -> Fraction:
    """Direct definition: measure of the strict upper-level set at alpha."""
    mask = 0
    for i, value in enumerate(x):
        if value > alpha:
            mask |= 1 << i
    return measure[mask]


def gsf_pointwise(x, measure, fca, alpha: Fraction) -> Fraction:
    """Direct definition: minimum complement measure over qualifying sets."""
    best = None
    for mask in sorted(fca.collection):
        if fca.aggregate(x, mask) <= alpha:
            candidate = measure.complement_value(mask)
            if best is None or candidate < best:
                best = candidate
    assert best is not None, "the empty set always qualifies"
    return best


def gsf_oracle(x, measure, fca) -> gsurv.StepFn:
    """Independent construction: per-alpha brute force on the threshold grid.

    Evaluates the defining minimum at every candidate breakpoint instead of
    sweeping a running minimum, so it exercises a different code path than
    the library.
    """
    thresholds = sorted(
        {Fraction(0), *(fca.aggregate(x, mask) for mask in fca.collection)}
    )
    return gsurv.StepFn.from_steps(
        [(t, gsf_pointwise(x, measure, fca, t)) for t in thresholds]
    )


def probe_alphas(fn: gsurv.StepFn) -> list[Fraction]:
    """Breakpoints, midpoints between them, and a point past the last one."""
    points = list(fn.breakpoints)
    for a, b in zip(fn.breakpoints, fn.breakpoints[1:]):
        points.append((a + b) / 2)
    points.append(fn.breakpoints[-1] + 1)
    return sorted(points)
