"""Ground sets, subset bitmasks, exact values, and monotone measures.

Subsets of the ground set {1, .., n} are plain ints: bit i-1 set means
element i belongs to the subset.  Values are exact rationals
(`fractions.Fraction`), so every comparison in the library is tolerance
free unless an approximate operator is explicitly involved.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    EmptySetNonzero,
    GridInvalid,
    NotMonotone,
    ParseError,
    TotalNotPositive,
    WrongLength,
)

__all__ = [
    "MAX_GROUND_SIZE",
    "Value",
    "GroundSet",
    "MonotoneMeasure",
    "parse_value",
    "format_value",
    "parse_subset",
    "format_subset",
    "elements",
    "parse_vector",
    "format_vector",
    "validate_measure",
    "weakest_measure",
    "strict_binary_measure",
    "counting_measure",
    "is_strictly_monotone_on",
    "is_null_set",
    "random_monotone_measure",
    "measure_to_json",
    "measure_from_json",
]

# Dense 2^n tables must fit in memory.
MAX_GROUND_SIZE = 24

Value = Fraction

ZERO = Fraction(0)


def parse_value(raw) -> Fraction:
    """Parse a nonnegative exact rational from a decimal or 'p/q' string."""
    if isinstance(raw, Fraction):
        value = raw
    elif isinstance(raw, bool):
        raise ParseError(f"not a rational value: {raw!r}")
    elif isinstance(raw, int):
        value = Fraction(raw)
    elif isinstance(raw, str):
        try:
            value = Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational value: {raw!r}") from exc
    else:
        raise ParseError(f"unsupported value type: {type(raw).__name__}")
    if value < 0:
        raise ParseError(f"value must be nonnegative: {raw!r}")
    return value


def format_value(value: Fraction) -> str:
    """Render exactly: a finite decimal when one exists, else 'p/q'."""
    rest = value.denominator
    twos = fives = 0
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(value.numerator)
    scaled = abs(value.numerator) * 10**digits // value.denominator
    text = str(scaled).rjust(digits + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def elements(mask: int) -> Iterator[int]:
    """Yield the 1-based elements of a subset mask in increasing order."""
    i = 1
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def format_subset(mask: int) -> str:
    """Render a mask as '{1,3}'; the empty set renders as '{}'."""
    return "{" + ",".join(str(i) for i in elements(mask)) + "}"


def parse_subset(key: str, n: int) -> int:
    """Parse a '{1,3}' style subset key, validating membership in 1..n."""
    text = key.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError(f"subset key must look like '{{1,3}}': {key!r}")
    body = text[1:-1].strip()
    mask = 0
    if body:
        for part in body.split(","):
            try:
                element = int(part)
            except ValueError as exc:
                raise ParseError(f"bad element {part!r} in subset key {key!r}") from exc
            if not 1 <= element <= n:
                raise ParseError(f"element {element} outside 1..{n} in key {key!r}")
            mask |= 1 << (element - 1)
    return mask


def parse_vector(raw: Sequence, n: int | None = None) -> tuple[Fraction, ...]:
    """Parse a vector of nonnegative values, optionally checking its length."""
    vec = tuple(parse_value(v) for v in raw)
    if n is not None and len(vec) != n:
        raise ParseError(f"vector must have {n} components, got {len(vec)}")
    if not vec:
        raise ParseError("vector must be nonempty")
    return vec


def format_vector(x: Sequence[Fraction]) -> list[str]:
    return [format_value(v) for v in x]


@dataclass(frozen=True)
class GroundSet:
    """The index universe {1, .., n}, 1 ≤ n ≤ 24."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_GROUND_SIZE:
            raise ValueError(
                f"ground set size must be an integer in 1..{MAX_GROUND_SIZE}, got {self.n!r}"
            )

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def complement(self, mask: int) -> int:
        return self.full ^ mask

    def subsets(self) -> range:
        """All 2^n subset masks in bitmask order."""
        return range(1 << self.n)

    def covering_pairs(self) -> Iterator[tuple[int, int]]:
        """All pairs E ⊂ E ∪ {i}; enough to certify monotonicity."""
        for mask in self.subsets():
            for i in range(self.n):
                bit = 1 << i
                if not mask & bit:
                    yield mask, mask | bit

    def contains(self, mask: int) -> bool:
        return 0 <= mask <= self.full


def _as_ground(n: GroundSet | int) -> GroundSet:
    return n if isinstance(n, GroundSet) else GroundSet(n)


@dataclass(frozen=True)
class MonotoneMeasure:
    """A nondecreasing set function on the full power set.

    The table is indexed by subset mask; entries are exact rationals with
    table[∅] = 0 and table[full] > 0.  Instances are immutable and safe to
    share; construct them through :func:`validate_measure` or one of the
    generators below.
    """

    n: int
    table: tuple[Fraction, ...]

    def __getitem__(self, mask: int) -> Fraction:
        return self.table[mask]

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)

    @property
    def total(self) -> Fraction:
        return self.table[-1]

    def complement_value(self, mask: int) -> Fraction:
        """The measure of the complement of ``mask``."""
        return self.table[(1 << self.n) - 1 - mask]


def validate_measure(raw_table: Sequence, n: GroundSet | int) -> MonotoneMeasure:
    """Accept a 2^n table as a monotone measure or raise a witnessed error."""
    ground = _as_ground(n)
    size = 1 << ground.n
    if len(raw_table) != size:
        raise WrongLength(size, len(raw_table))
    table = tuple(parse_value(v) for v in raw_table)
    if table[0] != 0:
        raise EmptySetNonzero(table[0])
    if table[-1] <= 0:
        raise TotalNotPositive(table[-1])
    for small, large in ground.covering_pairs():
        if table[small] > table[large]:
            raise NotMonotone(small, large, table[small], table[large])
    return MonotoneMeasure(ground.n, table)


def weakest_measure(n: GroundSet | int, total: Fraction | str | int = 1) -> MonotoneMeasure:
    """The measure that is ``total`` on the full set and 0 elsewhere."""
    ground = _as_ground(n)
    total = parse_value(total)
    if total <= 0:
        raise TotalNotPositive(total)
    table = [ZERO] * (1 << ground.n)
    table[-1] = total
    return MonotoneMeasure(ground.n, tuple(table))


def strict_binary_measure(n: GroundSet | int) -> MonotoneMeasure:
    """Binary-weight measure E ↦ Σ_{i∈E} 2^(i-1); injective on all subsets."""
    ground = _as_ground(n)
    return MonotoneMeasure(
        ground.n, tuple(Fraction(mask) for mask in ground.subsets())
    )


def counting_measure(n: GroundSet | int) -> MonotoneMeasure:
    """Cardinality as a measure."""
    ground = _as_ground(n)
    return MonotoneMeasure(
        ground.n, tuple(Fraction(mask.bit_count()) for mask in ground.subsets())
    )


def is_strictly_monotone_on(measure: MonotoneMeasure, subsets: Iterable[int]) -> bool:
    """True iff the measure is injective on the given collection."""
    seen: dict[Fraction, int] = {}
    for mask in subsets:
        value = measure[mask]
        if value in seen and seen[value] != mask:
            return False
        seen[value] = mask
    return True


def is_null_set(measure: MonotoneMeasure, null_candidate: int) -> bool:
    """True iff joining the candidate never changes the measure of any set."""
    table = measure.table
    for mask in measure.ground.subsets():
        if table[mask | null_candidate] != table[mask]:
            return False
    return True


def random_monotone_measure(
    n: GroundSet | int, seed: int, grid: Sequence[Fraction | str | int]
) -> MonotoneMeasure:
    """Draw a grid-valued monotone measure, deterministic in the seed.

    Subsets are filled in increasing cardinality order; each value is drawn
    uniformly from the grid entries that keep monotonicity (the full set is
    forced positive).
    """
    ground = _as_ground(n)
    values = sorted({parse_value(v) for v in grid})
    if ZERO not in values or values[-1] <= 0:
        raise GridInvalid(f"grid must contain 0 and a positive value, got {grid!r}")
    rng = random.Random(seed)
    size = 1 << ground.n
    table: list[Fraction] = [ZERO] * size
    order = sorted(ground.subsets(), key=lambda m: (m.bit_count(), m))
    for mask in order:
        if mask == 0:
            continue
        floor = ZERO
        rest = mask
        while rest:
            bit = rest & -rest
            covered = table[mask ^ bit]
            if covered > floor:
                floor = covered
            rest ^= bit
        if mask == size - 1:
            candidates = [v for v in values if v >= floor and v > 0]
        else:
            candidates = [v for v in values if v >= floor]
        table[mask] = rng.choice(candidates)
    return validate_measure(table, ground)


def measure_to_json(measure: MonotoneMeasure) -> list[str]:
    """Array form: one decimal string per subset, in bitmask order."""
    return [format_value(v) for v in measure.table]


def measure_from_json(payload, n: GroundSet | int) -> MonotoneMeasure:
    """Accept the array form or an object keyed by '{1,3}' style subset keys."""
    ground = _as_ground(n)
    if isinstance(payload, Mapping):
        size = 1 << ground.n
        if len(payload) != size:
            raise WrongLength(size, len(payload))
        table: list = [None] * size
        for key, value in payload.items():
            mask = parse_subset(key, ground.n)
            if table[mask] is not None:
                raise ParseError(f"duplicate subset key {key!r}")
            table[mask] = value
        return validate_measure(table, ground)
    if isinstance(payload, Sequence) and not isinstance(payload, (str, bytes)):
        return validate_measure(payload, ground)
    raise ParseError("measure must be a list in bitmask order or a subset-key object")
