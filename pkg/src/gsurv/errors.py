"""Exception types shared across the library."""
from __future__ import annotations


class GsurvError(Exception):
    """Base class for all library errors."""


class ParseError(GsurvError, ValueError):
    """Malformed textual input (values, subset keys, JSON payloads)."""


class MeasureError(GsurvError, ValueError):
    """A raw table cannot be accepted as a monotone measure."""


class WrongLength(MeasureError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"measure table must have {expected} entries, got {got}")
        self.expected = expected
        self.got = got


class EmptySetNonzero(MeasureError):
    def __init__(self, value):
        super().__init__(f"measure of the empty set must be 0, got {value}")
        self.value = value


class TotalNotPositive(MeasureError):
    def __init__(self, value):
        super().__init__(f"measure of the full set must be positive, got {value}")
        self.value = value


class NotMonotone(MeasureError):
    """Witnessed by a covering pair small ⊂ large with decreasing values."""

    def __init__(self, small: int, large: int, small_value, large_value):
        super().__init__(
            f"monotonicity fails on masks {small:#b} ⊂ {large:#b}: "
            f"{small_value} > {large_value}"
        )
        self.small = small
        self.large = large
        self.small_value = small_value
        self.large_value = large_value


class GridInvalid(GsurvError, ValueError):
    """A value grid for measure generation must contain 0 and a positive entry."""


class ProbeMalformed(GsurvError, ValueError):
    """A monotonicity probe pair does not satisfy x ≤ y on the conditioning set."""


class ApproxOperatorWithoutTolerance(GsurvError):
    """An approximate-valued operator was used in an exact computation.

    Power-mean style operators (p ≠ 1) return floats; equality-sensitive
    computations refuse them unless the caller supplies a comparison
    tolerance.
    """


class ConsistencyViolation(GsurvError):
    """A proved relation between condition verdicts and the computed step
    functions failed to hold; indicates an implementation bug."""


class LatticeViolation(ConsistencyViolation):
    """A row of the condition-relationship table failed on an instance."""

    def __init__(self, rows, message: str = ""):
        detail = "; ".join(r.row_id for r in rows)
        super().__init__(message or f"violated rows: {detail}")
        self.rows = tuple(rows)


class NotMonotoneFamily(GsurvError):
    """The operator family is not nondecreasing with respect to sets."""


class CollectionNotPowerset(GsurvError):
    """The check requires the conditioning collection to be the full power set."""


class ValuesNotMonotone(GsurvError, ValueError):
    """Chain value assignments must be nonincreasing (strictly, if requested)."""
