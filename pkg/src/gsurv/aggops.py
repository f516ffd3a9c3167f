"""Conditional aggregation operators and operator families.

An operator maps (vector, conditioning set) to a nonnegative value and
must be monotone in the vector on the conditioning set while vanishing on
the indicator of the complement.  A family attaches one operator to every
set of a collection containing the empty set, on which it aggregates to 0
by convention.

Numerics are two tier: every built-in except the power means is closed
over the rationals and evaluates exactly; power-mean style operators with
exponent ≠ 1 return floats and are rejected by equality-sensitive callers
unless those are given an explicit tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import GsurvError, ParseError, ProbeMalformed
from .levels import level_indices, sorted_view
from .setfun import (
    GroundSet,
    MonotoneMeasure,
    elements,
    format_subset,
    format_value,
    is_null_set,
    measure_from_json,
    measure_to_json,
    parse_subset,
    parse_value,
)

__all__ = [
    "agg_max",
    "agg_sum",
    "agg_pmean",
    "agg_weighted_max",
    "agg_jintegral",
    "agg_ess_sup",
    "agg_size",
    "AggregationOperator",
    "MaxOperator",
    "SumOperator",
    "PowerMeanOperator",
    "WeightedMaxOperator",
    "ChoquetOperator",
    "ShilkretOperator",
    "SugenoOperator",
    "EssentialSupOperator",
    "SumSize",
    "PowerMeanSize",
    "CustomSize",
    "SizeOperator",
    "CustomOperator",
    "Fca",
    "powerset_collection",
    "chain_collection",
    "ValidationReport",
    "validate_cao",
    "MonotonicityVerdict",
    "is_nondecreasing_wrt_sets",
    "operator_to_json",
    "operator_from_json",
    "collection_to_json",
    "collection_from_json",
]

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------- evaluations


def agg_max(x: Sequence[Fraction], mask: int) -> Fraction:
    """Largest component on the conditioning set; 0 on the empty set."""
    best = ZERO
    i = 0
    while mask:
        if mask & 1 and x[i] > best:
            best = x[i]
        mask >>= 1
        i += 1
    return best


def agg_sum(x: Sequence[Fraction], mask: int) -> Fraction:
    """Component sum on the conditioning set; 0 on the empty set."""
    total = ZERO
    i = 0
    while mask:
        if mask & 1:
            total += x[i]
        mask >>= 1
        i += 1
    return total


def agg_pmean(x: Sequence[Fraction], mask: int, p: Fraction) -> Fraction | float:
    """Power mean of exponent p on the conditioning set; 0 on the empty set.

    Exact for p = 1 (arithmetic mean), float otherwise.
    """
    if p <= 0:
        raise ValueError("power-mean exponent must be positive")
    count = mask.bit_count()
    if count == 0:
        return ZERO
    if p == 1:
        return agg_sum(x, mask) / count
    exponent = float(p)
    total = sum(float(x[i - 1]) ** exponent for i in elements(mask))
    return (total / count) ** (1.0 / exponent)


def agg_weighted_max(
    x: Sequence[Fraction],
    mask: int,
    w: Sequence[Fraction],
    z: Sequence[Fraction],
) -> Fraction:
    """max_{i∈B}(x_i·w_i) / max_{i∈B} z_i, with 0/0 = 0 on the empty set."""
    if mask == 0:
        return ZERO
    num = max(x[i - 1] * w[i - 1] for i in elements(mask))
    den = max(z[i - 1] for i in elements(mask))
    return num / den


def agg_jintegral(
    x: Sequence[Fraction], mask: int, measure: MonotoneMeasure, mode: str
) -> Fraction:
    """Choquet, Shilkret, or Sugeno integral of the vector restricted to B.

    The vector is multiplied by the indicator of B first, so the value
    depends only on components inside B and is 0 on the empty set.
    """
    n = len(x)
    y = tuple(x[i] if mask >> i & 1 else ZERO for i in range(n))
    view = sorted_view(y)
    if mode == "choquet":
        total = ZERO
        for i in range(1, n + 1):
            low = view.levels[i]
            if low == 0:
                continue
            total += low * (measure[view.upper_set(i)] - measure[view.upper_set(i + 1)])
        return total
    if mode == "shilkret":
        best = ZERO
        for i in range(1, n + 1):
            candidate = view.levels[i] * measure[view.upper_set(i)]
            if candidate > best:
                best = candidate
        return best
    if mode == "sugeno":
        best = ZERO
        for i in range(1, n + 1):
            candidate = min(view.levels[i], measure[view.upper_set(i)])
            if candidate > best:
                best = candidate
        return best
    raise ValueError(f"unknown integral mode: {mode!r}")


def agg_ess_sup(x: Sequence[Fraction], mask: int, measure: MonotoneMeasure) -> Fraction:
    """Least level whose strict upper set (within B) is null for the measure."""
    n = len(x)
    y = tuple(x[i] if mask >> i & 1 else ZERO for i in range(n))
    for alpha in sorted({ZERO, *y}):
        above = 0
        for i in range(n):
            if y[i] > alpha:
                above |= 1 << i
        if is_null_set(measure, above):
            return alpha
    raise AssertionError("unreachable: the empty upper set is always null")


def agg_size(
    x: Sequence[Fraction],
    mask: int,
    size: "SizeSpec",
    domains: Iterable[int],
) -> Fraction | float:
    """Outer supremum of a size kernel over a domain collection; 0 if empty."""
    n = len(x)
    y = tuple(x[i] if mask >> i & 1 else ZERO for i in range(n))
    best: Fraction | float = ZERO
    for domain in domains:
        candidate = size.kernel(y, domain)
        if candidate > best:
            best = candidate
    return best


# ---------------------------------------------------------------- size kernels


class SizeSpec:
    """A set-indexed aggregation kernel s(x)(D)."""

    exact = True
    kind = "abstract"

    def kernel(self, y: Sequence[Fraction], domain: int) -> Fraction | float:
        raise NotImplementedError

    def params_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params_json()}


@dataclass(frozen=True)
class SumSize(SizeSpec):
    kind = "sum"

    def kernel(self, y, domain):
        return agg_sum(y, domain)


@dataclass(frozen=True)
class PowerMeanSize(SizeSpec):
    """Count-normalized p-th power kernel; exact only for p = 1."""

    p: Fraction

    kind = "pmean"

    def __post_init__(self):
        object.__setattr__(self, "p", parse_value(self.p))
        if self.p <= 0:
            raise ValueError("size exponent must be positive")

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return self.p == 1

    def kernel(self, y, domain):
        return agg_pmean(y, domain, self.p)

    def params_json(self):
        return {"p": format_value(self.p)}


@dataclass(frozen=True)
class CustomSize(SizeSpec):
    """User-supplied kernel hook; must be pure and side-effect free."""

    fn: Callable[[Sequence[Fraction], int], Fraction | float]
    exact: bool = True

    kind = "custom"

    def kernel(self, y, domain):
        return self.fn(y, domain)

    def to_json(self):
        raise ParseError("custom size kernels do not serialize")


# ---------------------------------------------------------------- operators


class AggregationOperator:
    """Base class of conditional aggregation operators.

    ``exact`` marks rational-closed evaluation, ``monotone_in_sets`` marks
    operators known by construction to be nondecreasing in the conditioning
    set, and ``max_equivalent`` marks operators that coincide with the
    maximum operator on every conditioning set.
    """

    kind = "abstract"
    exact = True
    monotone_in_sets = False
    max_equivalent = False

    def value(self, x: Sequence[Fraction], mask: int) -> Fraction | float:
        raise NotImplementedError

    def params_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params_json()}


@dataclass(frozen=True)
class MaxOperator(AggregationOperator):
    kind = "max"
    monotone_in_sets = True
    max_equivalent = True

    def value(self, x, mask):
        return agg_max(x, mask)


@dataclass(frozen=True)
class SumOperator(AggregationOperator):
    kind = "sum"

    def value(self, x, mask):
        return agg_sum(x, mask)


@dataclass(frozen=True)
class PowerMeanOperator(AggregationOperator):
    p: Fraction

    kind = "pmean"

    def __post_init__(self):
        object.__setattr__(self, "p", parse_value(self.p))
        if self.p <= 0:
            raise ValueError("power-mean exponent must be positive")

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return self.p == 1

    def value(self, x, mask):
        return agg_pmean(x, mask, self.p)

    def params_json(self):
        return {"p": format_value(self.p)}


@dataclass(frozen=True)
class WeightedMaxOperator(AggregationOperator):
    """max_{i∈B}(x_i·w_i) / max_{i∈B} z_i with weights in [0,1], max z = 1."""

    w: tuple[Fraction, ...]
    z: tuple[Fraction, ...]

    kind = "weighted_max"

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(parse_value(v) for v in self.w))
        object.__setattr__(self, "z", tuple(parse_value(v) for v in self.z))
        if len(self.w) != len(self.z):
            raise ValueError("weight vectors must have equal length")
        if any(v > 1 for v in self.w):
            raise ValueError("w components must lie in [0,1]")
        if any(not 0 < v <= 1 for v in self.z):
            raise ValueError("z components must lie in (0,1]")
        if max(self.z) != 1:
            raise ValueError("z must attain 1")

    @property
    def max_equivalent(self) -> bool:  # type: ignore[override]
        return all(v == 1 for v in self.w) and all(v == 1 for v in self.z)

    @property
    def monotone_in_sets(self) -> bool:  # type: ignore[override]
        return self.max_equivalent

    def value(self, x, mask):
        return agg_weighted_max(x, mask, self.w, self.z)

    def params_json(self):
        return {
            "w": [format_value(v) for v in self.w],
            "z": [format_value(v) for v in self.z],
        }


@dataclass(frozen=True)
class _IntegralOperator(AggregationOperator):
    m: MonotoneMeasure

    monotone_in_sets = True
    mode = "abstract"

    def value(self, x, mask):
        return agg_jintegral(x, mask, self.m, self.mode)

    def params_json(self):
        return {"m": measure_to_json(self.m)}


@dataclass(frozen=True)
class ChoquetOperator(_IntegralOperator):
    kind = "choquet"
    mode = "choquet"


@dataclass(frozen=True)
class ShilkretOperator(_IntegralOperator):
    kind = "shilkret"
    mode = "shilkret"


@dataclass(frozen=True)
class SugenoOperator(_IntegralOperator):
    kind = "sugeno"
    mode = "sugeno"


@dataclass(frozen=True)
class EssentialSupOperator(AggregationOperator):
    m: MonotoneMeasure

    kind = "ess_sup"
    monotone_in_sets = True

    def value(self, x, mask):
        return agg_ess_sup(x, mask, self.m)

    def params_json(self):
        return {"m": measure_to_json(self.m)}


@dataclass(frozen=True)
class SizeOperator(AggregationOperator):
    size: SizeSpec
    domains: frozenset[int]

    kind = "size"

    def __post_init__(self):
        object.__setattr__(self, "domains", frozenset(self.domains))

    @property
    def exact(self) -> bool:  # type: ignore[override]
        return self.size.exact

    def value(self, x, mask):
        return agg_size(x, mask, self.size, sorted(self.domains))

    def params_json(self):
        return {
            "size": self.size.to_json(),
            "domains": [format_subset(d) for d in sorted(self.domains)],
        }


@dataclass(frozen=True)
class CustomOperator(AggregationOperator):
    """Wrap a user hook (vector, mask) -> value; must be pure.

    Declared exactness is trusted: exact hooks must return rationals.
    """

    fn: Callable[[Sequence[Fraction], int], Fraction | float]
    label: str = "custom"
    exact: bool = True

    kind = "custom"

    def value(self, x, mask):
        result = self.fn(x, mask)
        if self.exact and not isinstance(result, Fraction):
            if isinstance(result, float):
                raise GsurvError(
                    f"custom operator {self.label!r} declared exact but returned a float"
                )
            result = Fraction(result)
        return result

    def to_json(self):
        raise ParseError("custom operators do not serialize")


# ---------------------------------------------------------------- families


def powerset_collection(n: GroundSet | int) -> frozenset[int]:
    ground = n if isinstance(n, GroundSet) else GroundSet(n)
    return frozenset(ground.subsets())


def chain_collection(x: Sequence[Fraction]) -> frozenset[int]:
    """Complements of the upper-set chain at the jump indices, plus the empty set.

    Restricting the maximum operator to this collection already reproduces
    the plain survival function of x for every measure; the empty set is
    adjoined so the result is always a valid family collection.
    """
    view = sorted_view(x)
    full = (1 << view.n) - 1
    masks = {full ^ view.upper_set(k + 1) for k in level_indices(x, view).jumps}
    masks.add(0)
    return frozenset(masks)


@dataclass(frozen=True)
class Fca:
    """An operator together with the collection of conditioning sets.

    The collection always contains the empty set, on which the family
    aggregates to 0 regardless of the operator.
    """

    op: AggregationOperator
    collection: frozenset[int]
    n: int

    def __post_init__(self):
        ground = GroundSet(self.n)
        object.__setattr__(self, "collection", frozenset(self.collection))
        if 0 not in self.collection:
            raise ValueError("the collection must contain the empty set")
        for mask in self.collection:
            if not ground.contains(mask):
                raise ValueError(f"mask {mask:#b} outside the ground set of size {self.n}")

    @classmethod
    def powerset(cls, op: AggregationOperator, n: GroundSet | int) -> "Fca":
        ground = n if isinstance(n, GroundSet) else GroundSet(n)
        return cls(op, powerset_collection(ground), ground.n)

    @classmethod
    def on_chain(cls, op: AggregationOperator, x: Sequence[Fraction]) -> "Fca":
        return cls(op, chain_collection(x), len(x))

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)

    @property
    def is_powerset(self) -> bool:
        return len(self.collection) == 1 << self.n

    def aggregate(self, x: Sequence[Fraction], mask: int) -> Fraction | float:
        """Evaluate the operator; the empty set aggregates to 0 by convention."""
        if mask == 0:
            return ZERO
        return self.op.value(x, mask)


# ---------------------------------------------------------------- validity


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking the operator axioms.

    Refutation carries a witness; a pass is conclusive for built-in
    operators and probe-limited for custom hooks.
    """

    valid: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate_cao(
    op: AggregationOperator,
    n: GroundSet | int,
    probes: Sequence[tuple[Sequence[Fraction], Sequence[Fraction], int]],
) -> ValidationReport:
    """Check the operator axioms: vanish on complement indicators for every
    nonempty set, aggregate 0 on the empty set, and be monotone on probes.

    Each probe is (x, y, B) with x ≤ y componentwise on B.
    """
    ground = n if isinstance(n, GroundSet) else GroundSet(n)
    if not probes:
        raise ProbeMalformed("at least one probe is required")
    for mask in range(1, ground.full + 1):
        indicator = tuple(
            ONE if not mask >> i & 1 else ZERO for i in range(ground.n)
        )
        got = op.value(indicator, mask)
        if got != 0:
            return ValidationReport(
                False,
                {
                    "check": "complement-indicator",
                    "set": format_subset(mask),
                    "got": str(got),
                },
            )
    for x, y, mask in probes:
        for i in range(ground.n):
            if mask >> i & 1 and x[i] > y[i]:
                raise ProbeMalformed(
                    f"probe violates x ≤ y on {format_subset(mask)} at element {i + 1}"
                )
        if op.value(x, 0) != 0 or op.value(y, 0) != 0:
            return ValidationReport(
                False, {"check": "empty-set", "got": str(op.value(x, 0))}
            )
        if mask and op.value(x, mask) > op.value(y, mask):
            return ValidationReport(
                False,
                {
                    "check": "vector-monotonicity",
                    "set": format_subset(mask),
                    "lower": str(op.value(x, mask)),
                    "upper": str(op.value(y, mask)),
                },
            )
    return ValidationReport(True)


@dataclass(frozen=True)
class MonotonicityVerdict:
    """Whether the map from sets to aggregated values is nondecreasing.

    ``symbolic`` marks operators accepted by construction; otherwise the
    verdict is probe-limited and only a refutation is conclusive.
    """

    passed: bool
    symbolic: bool = False
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.passed


def is_nondecreasing_wrt_sets(
    fca: Fca, probes: Sequence[Sequence[Fraction]]
) -> MonotonicityVerdict:
    """Check A(x|E) ≤ A(x|E ∪ {i}) on covering pairs inside the collection."""
    if fca.op.monotone_in_sets:
        return MonotonicityVerdict(True, symbolic=True)
    if not probes:
        raise ProbeMalformed("at least one probe vector is required")
    pairs = [
        (small, small | (1 << i))
        for small in sorted(fca.collection)
        for i in range(fca.n)
        if not small >> i & 1 and small | (1 << i) in fca.collection
    ]
    for x in probes:
        for small, large in pairs:
            lo = fca.aggregate(x, small)
            hi = fca.aggregate(x, large)
            if lo > hi:
                return MonotonicityVerdict(
                    False,
                    witness={
                        "vector": [format_value(v) for v in x],
                        "small": format_subset(small),
                        "large": format_subset(large),
                        "small_value": str(lo),
                        "large_value": str(hi),
                    },
                )
    return MonotonicityVerdict(True)


# ---------------------------------------------------------------- serialization

_SIZE_KINDS = {"sum": SumSize, "pmean": PowerMeanSize}


def _size_from_json(obj) -> SizeSpec:
    if not isinstance(obj, Mapping) or "kind" not in obj:
        raise ParseError("size spec must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "sum":
        return SumSize()
    if kind == "pmean":
        return PowerMeanSize(parse_value(obj.get("p", "1")))
    raise ParseError(f"unknown size kind: {kind!r}")


def operator_to_json(op: AggregationOperator) -> dict:
    return op.to_json()


def operator_from_json(obj, n: GroundSet | int) -> AggregationOperator:
    ground = n if isinstance(n, GroundSet) else GroundSet(n)
    if not isinstance(obj, Mapping) or "kind" not in obj:
        raise ParseError("operator must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "max":
        return MaxOperator()
    if kind == "sum":
        return SumOperator()
    if kind == "pmean":
        return PowerMeanOperator(parse_value(obj.get("p", "1")))
    if kind == "weighted_max":
        w = [parse_value(v) for v in obj["w"]]
        z = [parse_value(v) for v in obj["z"]]
        if len(w) != ground.n or len(z) != ground.n:
            raise ParseError("weight vectors must match the ground set size")
        return WeightedMaxOperator(tuple(w), tuple(z))
    if kind in ("choquet", "shilkret", "sugeno", "ess_sup"):
        measure = measure_from_json(obj["m"], ground)
        cls = {
            "choquet": ChoquetOperator,
            "shilkret": ShilkretOperator,
            "sugeno": SugenoOperator,
            "ess_sup": EssentialSupOperator,
        }[kind]
        return cls(measure)
    if kind == "size":
        size = _size_from_json(obj.get("size", {"kind": "sum"}))
        domains_obj = obj.get("domains", "powerset")
        domains = collection_from_json(domains_obj, ground, allow_chain=False)
        return SizeOperator(size, frozenset(domains))
    raise ParseError(f"unknown operator kind: {kind!r}")


def collection_to_json(collection: frozenset[int], n: int) -> str | list[str]:
    if len(collection) == 1 << n:
        return "powerset"
    return [format_subset(mask) for mask in sorted(collection)]


def collection_from_json(
    obj,
    n: GroundSet | int,
    x: Sequence[Fraction] | None = None,
    allow_chain: bool = True,
) -> frozenset[int]:
    """Parse 'powerset', 'chain' (needs the vector), or an explicit key list."""
    ground = n if isinstance(n, GroundSet) else GroundSet(n)
    if obj == "powerset":
        return powerset_collection(ground)
    if obj == "chain":
        if not allow_chain or x is None:
            raise ParseError("a chain collection needs the input vector")
        return chain_collection(x)
    if isinstance(obj, Sequence) and not isinstance(obj, (str, bytes)):
        return frozenset(parse_subset(key, ground.n) for key in obj)
    raise ParseError(f"unknown collection spec: {obj!r}")
