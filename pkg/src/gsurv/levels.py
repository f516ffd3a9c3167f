"""Sorted views of vectors and the level-index systems built on them.

A sorted view fixes a nondecreasing rearrangement of a vector (stable in
the original index, so it is deterministic) together with the chain of
upper-level sets it induces.  The jump indices mark where the sorted
values strictly increase; they index the genuine plateaus of every
survival function of the vector.  Given a measure, consecutive plateaus
carrying the same measure value can be merged, which yields the smaller
merged-index system and, per merged index, the last jump index sharing
its measure value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .setfun import MonotoneMeasure

__all__ = ["SortedView", "LevelSystem", "sorted_view", "level_indices", "measure_level_indices"]


@dataclass(frozen=True)
class SortedView:
    """A stable nondecreasing rearrangement of a vector.

    ``perm[k]`` is the 0-based original position of the (k+1)-th smallest
    component; ``levels[k]`` is the k-th sorted value with ``levels[0] = 0``
    prepended.  The value at rank n+1 is infinite by convention and is
    represented by ``level(n + 1) is None``.
    """

    n: int
    perm: tuple[int, ...]
    levels: tuple[Fraction, ...]
    _uppers: tuple[int, ...]

    def level(self, k: int) -> Fraction | None:
        """Sorted value at rank k (0 ≤ k ≤ n); None stands for +∞ at n+1."""
        if k == self.n + 1:
            return None
        return self.levels[k]

    def upper_set(self, i: int) -> int:
        """Mask of positions holding the i-th smallest value and above.

        Valid for 1 ≤ i ≤ n+1; the (n+1)-st upper set is empty.  The sets
        form a strictly decreasing chain.
        """
        return self._uppers[i]

    def upper_chain(self) -> tuple[int, ...]:
        """All upper sets, largest first (index i-1 holds the i-th set)."""
        return self._uppers[1:]


def sorted_view(x: Sequence[Fraction]) -> SortedView:
    n = len(x)
    perm = tuple(sorted(range(n), key=lambda i: (x[i], i)))
    levels = (Fraction(0),) + tuple(x[i] for i in perm)
    uppers = [0] * (n + 2)
    mask = 0
    for i in range(n, 0, -1):
        mask |= 1 << perm[i - 1]
        uppers[i] = mask
    return SortedView(n, perm, levels, tuple(uppers))


@dataclass(frozen=True)
class LevelSystem:
    """Jump indices of a sorted vector, optionally merged by measure value.

    ``jumps`` always contains n and satisfies levels[min(jumps)] = 0.  When
    built against a measure, ``merged`` keeps only the jumps at which the
    measure of the upper set strictly drops below every earlier one, and
    ``merge_end[k]`` is the largest jump whose upper-set measure equals the
    one at k.
    """

    jumps: tuple[int, ...]
    merged: tuple[int, ...] | None = None
    merge_end: Mapping[int, int] | None = None


def level_indices(x: Sequence[Fraction], view: SortedView | None = None) -> LevelSystem:
    """Indices where the sorted vector strictly increases, plus n."""
    view = view or sorted_view(x)
    n = view.n
    jumps = tuple(
        k for k in range(n) if view.levels[k] < view.levels[k + 1]
    ) + (n,)
    return LevelSystem(jumps)


def measure_level_indices(
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    view: SortedView | None = None,
) -> LevelSystem:
    """Jump indices refined by the measure of the upper-set chain.

    A jump k (other than the smallest) survives the merge iff every earlier
    jump j has a strictly larger upper-set measure.  If the measure is
    injective on the upper-set chain, nothing merges.
    """
    view = view or sorted_view(x)
    jumps = level_indices(x, view).jumps
    chain_value = {k: measure[view.upper_set(k + 1)] for k in jumps}
    merged = []
    for pos, k in enumerate(jumps):
        if pos == 0:
            merged.append(k)
            continue
        if all(chain_value[j] > chain_value[k] for j in jumps[:pos]):
            merged.append(k)
    merge_end = {
        k: max(j for j in jumps if chain_value[j] == chain_value[k]) for k in merged
    }
    return LevelSystem(jumps, tuple(merged), merge_end)
