"""Reduction to ordered instances and the lifting of ordered allocations back.

An instance is *ordered* when every agent ranks the items the same way by
position: for goods each row is non-increasing, for chores each row is
non-decreasing (position 0 holds the largest |value| either way). Any additive
instance can be reduced to an ordered one by sorting each row independently;
an allocation computed for the ordered instance is then lifted back through a
picking sequence, and each agent ends up at least as well off on the original
instance as it was on the ordered one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInstanceError
from .model import GOODS, AdditiveInstance, Allocation


@dataclass(frozen=True)
class OrderedReduction:
    """An ordered copy of an instance plus the per-agent sort permutations.

    perms[i][j] is the original index of the good sitting at ordered position
    j in agent i's row, so ordered.values[i][j] == original.values[i][perms[i][j]].
    """

    ordered: AdditiveInstance
    perms: tuple[tuple[int, ...], ...]


def is_ordered(instance: AdditiveInstance) -> bool:
    """True iff every row is sorted by non-increasing |value|."""
    for row in instance.values:
        for a in range(len(row) - 1):
            if abs(row[a]) < abs(row[a + 1]):
                return False
    return True


def to_ordered(instance: AdditiveInstance) -> OrderedReduction:
    """Sort each agent's values by descending |value|, ties by original index.

    The tie rule makes the permutations (and everything downstream)
    deterministic. Goods rows come out non-increasing, chores rows
    non-decreasing; the multiset of each row is unchanged, so maximin shares
    are unchanged too.
    """
    perms = []
    rows = []
    for row in instance.values:
        perm = sorted(range(instance.m), key=lambda g: (-abs(row[g]), g))
        perms.append(tuple(perm))
        rows.append([row[g] for g in perm])
    ordered = AdditiveInstance(rows, kind=instance.kind)
    return OrderedReduction(ordered=ordered, perms=tuple(perms))


def lift_allocation(
    reduction: OrderedReduction,
    original: AdditiveInstance,
    ordered_alloc: Allocation,
) -> Allocation:
    """Turn an allocation of the ordered instance into one of the original.

    The owner of each ordered position picks its favourite remaining original
    item (highest value; for chores that is the least harmful remaining
    chore). Goods walk the positions forward: when position j picks, only j
    items are gone, so the pick is at least the (j+1)-th best, which is
    exactly the value at ordered position j. Chores walk the positions
    backward, from mildest to most harmful: when position j picks, m-1-j
    chores are gone, so the pick is at least the (m-j)-th best, again the
    value at ordered position j. Either way no agent ends up below its
    ordered bundle value. Ties follow the walk direction (lowest index for
    goods, highest for chores), so an already-ordered instance lifts to the
    same bundle values.
    """
    m = original.m
    ordered = reduction.ordered
    if ordered.n != original.n or ordered.m != m or ordered.kind != original.kind:
        raise InvalidInstanceError("reduction does not belong to this instance")
    for i, perm in enumerate(reduction.perms):
        if any(ordered.values[i][j] != original.values[i][perm[j]] for j in range(m)):
            raise InvalidInstanceError("reduction does not belong to this instance")
    if ordered_alloc.m != m or ordered_alloc.n != original.n:
        raise InvalidInstanceError("ordered allocation shape does not match instance")
    if not ordered_alloc.is_complete():
        raise InvalidInstanceError("lifting needs a complete ordered allocation")

    owner = [-1] * m
    for i, b in enumerate(ordered_alloc.bundles):
        for j in b:
            owner[j] = i

    remaining = [True] * m
    bundles: list[set[int]] = [set() for _ in range(original.n)]
    walk = range(m) if original.kind == GOODS else range(m - 1, -1, -1)
    for j in walk:
        i = owner[j]
        row = original.values[i]
        best = -1
        for g in walk:
            if remaining[g] and (best < 0 or row[g] > row[best]):
                best = g
        remaining[best] = False
        bundles[i].add(best)
    return Allocation(bundles, m)


def mms_invariance_check(instance: AdditiveInstance, budget: int | None = None) -> bool:
    """True iff sorting rows leaves every agent's exact maximin share unchanged.

    Test utility: the maximin share only depends on each row as a multiset, so
    this must hold for every instance the exact oracle can handle. Raises the
    oracle's budget error on instances too large to brute-force.
    """
    from .oracles import DEFAULT_ORACLE_BUDGET, mms_exact_additive

    if budget is None:
        budget = DEFAULT_ORACLE_BUDGET
    ordered = to_ordered(instance).ordered
    for i in range(instance.n):
        before = mms_exact_additive(instance, i, budget=budget)
        after = mms_exact_additive(ordered, i, budget=budget)
        if before.value != after.value:
            return False
    return True
