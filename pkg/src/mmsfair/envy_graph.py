"""Envy-graph allocation for ordered instances, with full run traces.

The allocator hands out items one at a time in position order. For goods the
next item goes to a *source* of the envy graph (an agent nobody envies); for
chores it goes to a *sink* (an agent who envies nobody). After every
assignment, envy cycles are resolved by rotating bundles along a cycle: each
agent on the cycle receives the bundle it envies. A rotation strictly
decreases the number of envy edges and never decreases any agent's value, so
resolution terminates and the graph is acyclic before each assignment, which
guarantees the needed source (or sink) exists.

Every step is recorded in a trace, enough to replay the exact sequence of
partial allocations later. On ordered goods instances every partial
allocation along the way is envy-free up to any good; the final allocation,
lifted back to the original instance, gives every agent at least 2n/(3n-1) of
its maximin share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InvalidInstanceError, NotOrderedError
from .model import GOODS, AdditiveInstance, Allocation, Value, is_efx
from .ordering import OrderedReduction, is_ordered, lift_allocation, to_ordered


class EnvyGraph:
    """Directed graph on agents with an edge i -> j iff i envies j."""

    __slots__ = ("n", "succ")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        self.n = n
        self.succ: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(j for (a, j) in edges if a == i)) for i in range(n)
        )

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in self.succ[i]]

    def sources(self) -> list[int]:
        """Agents with no incoming edge (nobody envies them)."""
        envied = {j for i in range(self.n) for j in self.succ[i]}
        return [i for i in range(self.n) if i not in envied]

    def sinks(self) -> list[int]:
        """Agents with no outgoing edge (they envy nobody)."""
        return [i for i in range(self.n) if not self.succ[i]]

    def find_cycle(self) -> list[int] | None:
        """First cycle found by depth-first search.

        Roots are tried in ascending index order and neighbours are scanned
        in ascending order, so the result is deterministic. Returns the cycle
        as an agent sequence [c_0, ..., c_k] with edges c_0->c_1->...->c_k->c_0,
        or None if the graph is acyclic.
        """
        color = [0] * self.n  # 0 unseen, 1 on stack, 2 done
        stack: list[int] = []

        def visit(u: int) -> list[int] | None:
            color[u] = 1
            stack.append(u)
            for w in self.succ[u]:
                if color[w] == 1:
                    return stack[stack.index(w):]
                if color[w] == 0:
                    found = visit(w)
                    if found is not None:
                        return found
            stack.pop()
            color[u] = 2
            return None

        for root in range(self.n):
            if color[root] == 0:
                found = visit(root)
                if found is not None:
                    return found
        return None


def build_envy_graph(instance: AdditiveInstance, allocation: Allocation) -> EnvyGraph:
    """Envy graph of a (possibly partial) allocation."""
    n = allocation.n
    own = [instance.value(i, allocation.bundles[i]) for i in range(n)]
    edges = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and own[i] < instance.value(i, allocation.bundles[j])
    ]
    return EnvyGraph(n, edges)


def resolve_cycles(
    instance: AdditiveInstance, allocation: Allocation
) -> tuple[Allocation, list[list[int]]]:
    """Rotate bundles along envy cycles until the envy graph is acyclic.

    On a cycle c_0 -> c_1 -> ... -> c_k -> c_0, agent c_t receives the bundle
    of c_{t+1} (the one it envies), so every agent on the cycle strictly gains
    and agents off the cycle keep their bundles. Each rotation strictly
    reduces the edge count, which bounds the number of rounds.
    """
    bundles = list(allocation.bundles)
    log: list[list[int]] = []
    while True:
        graph = build_envy_graph(instance, Allocation(bundles, allocation.m))
        cycle = graph.find_cycle()
        if cycle is None:
            return Allocation(bundles, allocation.m), log
        log.append(list(cycle))
        rotated = [bundles[cycle[(t + 1) % len(cycle)]] for t in range(len(cycle))]
        for t, agent in enumerate(cycle):
            bundles[agent] = rotated[t]


@dataclass(frozen=True)
class TraceStep:
    """One allocator iteration: which item went where, and what it triggered."""

    item: int
    agent: int
    cycles: tuple[tuple[int, ...], ...]
    values: tuple[Value, ...]  # every agent's own-bundle value after the step


@dataclass(frozen=True)
class RunTrace:
    """Complete record of an allocator run; replayable without the allocator."""

    n: int
    m: int
    steps: tuple[TraceStep, ...]

    def replay(self) -> Iterator[tuple[list[frozenset[int]], list[frozenset[int]]]]:
        """Yield (after assignment, after cycle resolution) bundles per step."""
        bundles: list[frozenset[int]] = [frozenset() for _ in range(self.n)]
        for step in self.steps:
            bundles[step.agent] = bundles[step.agent] | {step.item}
            mid = list(bundles)
            for cycle in step.cycles:
                rotated = [bundles[cycle[(t + 1) % len(cycle)]] for t in range(len(cycle))]
                for t, agent in enumerate(cycle):
                    bundles[agent] = rotated[t]
            yield mid, list(bundles)


def _allocate_ordered(instance: AdditiveInstance, pick: str) -> tuple[Allocation, RunTrace]:
    if not is_ordered(instance):
        raise NotOrderedError("allocator requires an ordered instance")
    n, m = instance.n, instance.m
    bundles: list[frozenset[int]] = [frozenset() for _ in range(n)]
    steps: list[TraceStep] = []
    for j in range(m):
        graph = build_envy_graph(instance, Allocation(bundles, m))
        candidates = graph.sources() if pick == "source" else graph.sinks()
        # the graph is acyclic here, so a source and a sink both exist
        agent = min(candidates)
        bundles[agent] = bundles[agent] | {j}
        resolved, log = resolve_cycles(instance, Allocation(bundles, m))
        bundles = list(resolved.bundles)
        steps.append(
            TraceStep(
                item=j,
                agent=agent,
                cycles=tuple(tuple(c) for c in log),
                values=tuple(instance.value(i, bundles[i]) for i in range(n)),
            )
        )
    return Allocation(bundles, m), RunTrace(n=n, m=m, steps=tuple(steps))


def envy_graph_allocate(instance: AdditiveInstance) -> tuple[Allocation, RunTrace]:
    """Allocate an ordered goods instance, item by item, to envy-graph sources."""
    if instance.kind != GOODS:
        raise InvalidInstanceError("goods allocator got a chores instance")
    return _allocate_ordered(instance, pick="source")


def solve_additive(instance: AdditiveInstance) -> Allocation:
    """Full goods pipeline: order the instance, allocate, lift the result back.

    The returned allocation gives every agent i at least 2n/(3n-1) times its
    maximin share: v_i(A_i) * (3n - 1) >= 2n * mu_i.
    """
    reduction = to_ordered(instance)
    ordered_alloc, _ = envy_graph_allocate(reduction.ordered)
    return lift_allocation(reduction, instance, ordered_alloc)


def check_efx_trace(instance: AdditiveInstance, trace: RunTrace) -> bool:
    """Replay a run and check envy-freeness up to any good at every step.

    Both intermediate states per step are checked: right after the item is
    assigned and again after cycle resolution.
    """
    for mid, end in trace.replay():
        if not is_efx(instance, Allocation(mid, trace.m)):
            return False
        if not is_efx(instance, Allocation(end, trace.m)):
            return False
    return True


def majorizes(a: Sequence[Value], b: Sequence[Value]) -> bool:
    """True iff sequence a majorizes b: sorted-descending prefix sums of a
    dominate those of b. Requires equal lengths and equal totals."""
    if len(a) != len(b):
        raise InvalidInstanceError("majorization compares equal-length sequences")
    xs = sorted(a, reverse=True)
    ys = sorted(b, reverse=True)
    if sum(xs) != sum(ys):
        raise InvalidInstanceError("majorization requires equal totals")
    run_a = Fraction(0)
    run_b = Fraction(0)
    for x, y in zip(xs, ys):
        run_a += x
        run_b += y
        if run_a < run_b:
            return False
    return True


def _strictly_decreasing_rows(instance: AdditiveInstance) -> bool:
    return all(
        all(row[a] > row[a + 1] for a in range(len(row) - 1))
        for row in instance.values
    )


def check_prefix_structure(instance: AdditiveInstance, trace: RunTrace) -> bool:
    """Check the forced shape of early partial allocations on distinct-value runs.

    On an ordered goods instance whose rows are strictly decreasing, as long
    as every bundle still has at most two items, the partial allocation after
    n+h items (h >= 0) is forced up to bundle order: items 0..n-h-1 sit in
    singletons and the remaining 2h items pair up first-with-last, i.e.
    {n-h, n+h-1}, {n-h+1, n+h-2}, ..., {n-1, n}. The check replays the trace
    and compares bundle multisets step by step until a bundle reaches size 3.
    """
    if instance.kind != GOODS:
        raise InvalidInstanceError("prefix structure is defined for goods instances")
    if not is_ordered(instance):
        raise NotOrderedError("prefix structure needs an ordered instance")
    if not _strictly_decreasing_rows(instance):
        raise InvalidInstanceError("prefix structure needs strictly decreasing rows")
    n = trace.n
    for count, (_, end) in enumerate(trace.replay(), start=1):
        if max(len(b) for b in end) > 2:
            break
        if count <= n:
            expected = [{g} for g in range(count)]
        else:
            h = count - n
            expected = [{g} for g in range(n - h)]
            expected += [{n - h + k, n + h - 1 - k} for k in range(h)]
        got = sorted((sorted(b) for b in end if b), key=lambda b: b[0])
        want = sorted((sorted(b) for b in expected), key=lambda b: b[0])
        if got != want:
            return False
    return True
