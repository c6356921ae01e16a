"""Submodular valuation oracles over a ground set of goods 0..m-1.

All families answer set queries through value_mask(mask), where bit k of the
mask stands for good k. Values are exact rationals. Each instance memoizes
its answers; ground sets here are desk-sized (m <= 20 or so), so the cache is
bounded by 2^m entries.

A valuation is admissible when it is normalized (empty set worth 0),
non-negative, monotone, and submodular. verify_submodular checks all four,
exhaustively up to 10 goods and by seeded sampling beyond that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InvalidInstanceError
from ..model import Value, ValueLike, as_value


def mask_of(goods: Iterable[int], m: int) -> int:
    mask = 0
    for g in goods:
        if not 0 <= g < m:
            raise InvalidInstanceError(f"good index {g} out of range [0,{m})")
        mask |= 1 << g
    return mask


def goods_of(mask: int) -> list[int]:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return out


class SubmodularValuation:
    """Base class: memoized set-function oracle addressed by bitmask."""

    __slots__ = ("m", "_cache")

    def __init__(self, m: int):
        if m < 0:
            raise InvalidInstanceError("ground set size must be non-negative")
        self.m = m
        self._cache: dict[int, Value] = {}

    def _value_mask_raw(self, mask: int) -> Value:
        raise NotImplementedError

    def value_mask(self, mask: int) -> Value:
        if mask >> self.m:
            raise InvalidInstanceError("mask addresses goods outside the ground set")
        hit = self._cache.get(mask)
        if hit is None:
            hit = self._value_mask_raw(mask)
            self._cache[mask] = hit
        return hit

    def evaluate(self, bundle: Iterable[int]) -> Value:
        return self.value_mask(mask_of(bundle, self.m))

    def singleton(self, g: int) -> Value:
        return self.value_mask(1 << g)

    def marginal_mask(self, mask: int, g: int) -> Value:
        """f(S + g) - f(S) for g outside S."""
        bit = 1 << g
        if mask & bit:
            raise InvalidInstanceError(f"good {g} already in the bundle")
        return self.value_mask(mask | bit) - self.value_mask(mask)

    def total(self) -> Value:
        return self.value_mask((1 << self.m) - 1)


class ExplicitTable(SubmodularValuation):
    """A set function given by its full table of 2^m values.

    table[mask] is the value of the bundle whose members are the set bits of
    mask (bit k = good k). The constructor only checks shape and
    normalization; run verify_submodular to validate the rest.
    """

    __slots__ = ("table",)

    def __init__(self, m: int, table: Sequence[ValueLike]):
        super().__init__(m)
        vals = tuple(as_value(v) for v in table)
        if len(vals) != 1 << m:
            raise InvalidInstanceError(
                f"table needs {1 << m} entries for m={m}, got {len(vals)}"
            )
        if vals[0] != 0:
            raise InvalidInstanceError("empty bundle must have value 0")
        self.table = vals

    def _value_mask_raw(self, mask: int) -> Value:
        return self.table[mask]


class WeightedCoverage(SubmodularValuation):
    """Coverage function: value of a bundle is the weight of the union it covers.

    covers[g] lists the universe elements covered by good g; weights[e] >= 0
    is the weight of element e. Coverage functions are always normalized,
    monotone and submodular.
    """

    __slots__ = ("weights", "covers", "_elem_masks")

    def __init__(self, m: int, weights: Sequence[ValueLike], covers: Sequence[Iterable[int]]):
        super().__init__(m)
        self.weights = tuple(as_value(w) for w in weights)
        if any(w < 0 for w in self.weights):
            raise InvalidInstanceError("element weights must be non-negative")
        if len(covers) != m:
            raise InvalidInstanceError("need one cover set per good")
        u = len(self.weights)
        packed = []
        for g, cov in enumerate(covers):
            emask = 0
            for e in cov:
                if not 0 <= e < u:
                    raise InvalidInstanceError(f"element {e} out of range [0,{u})")
                emask |= 1 << e
            packed.append(emask)
        self.covers = tuple(tuple(goods_of(em)) for em in packed)
        self._elem_masks = tuple(packed)

    def _value_mask_raw(self, mask: int) -> Value:
        covered = 0
        g = 0
        rest = mask
        while rest:
            if rest & 1:
                covered |= self._elem_masks[g]
            rest >>= 1
            g += 1
        total = Fraction(0)
        for e in goods_of(covered):
            total += self.weights[e]
        return total


class BudgetAdditive(SubmodularValuation):
    """Additive value capped at a budget: f(S) = min(cap, sum of weights in S)."""

    __slots__ = ("weights", "cap")

    def __init__(self, weights: Sequence[ValueLike], cap: ValueLike):
        super().__init__(len(weights))
        self.weights = tuple(as_value(w) for w in weights)
        self.cap = as_value(cap)
        if any(w < 0 for w in self.weights):
            raise InvalidInstanceError("weights must be non-negative")
        if self.cap < 0:
            raise InvalidInstanceError("cap must be non-negative")

    def _value_mask_raw(self, mask: int) -> Value:
        total = Fraction(0)
        for g in goods_of(mask):
            total += self.weights[g]
        return min(self.cap, total)


class MarginalValuation(SubmodularValuation):
    """The contraction f_H(S) = f(H + S) - f(H) of a valuation onto [m] \\ H.

    Shares the base oracle's ground-set indexing: goods in H must not appear
    in queried bundles. Contractions of submodular functions stay normalized,
    non-negative, monotone and submodular.
    """

    __slots__ = ("base", "h_mask")

    def __init__(self, base: SubmodularValuation, h: Iterable[int]):
        super().__init__(base.m)
        self.base = base
        self.h_mask = mask_of(h, base.m)

    def _value_mask_raw(self, mask: int) -> Value:
        if mask & self.h_mask:
            raise InvalidInstanceError("bundle overlaps the contracted set")
        return self.base.value_mask(mask | self.h_mask) - self.base.value_mask(self.h_mask)


@dataclass(frozen=True)
class SubmodularityReport:
    """Outcome of checking a set-function oracle for admissibility.

    ok is True when every check passed; the report is truthy exactly then.
    On failure, reason names the broken property and violation holds the
    offending (A, B, g): for a submodularity break, A is a proper subset of B,
    g lies outside B, and g's marginal onto A is smaller than onto B; for a
    monotonicity break B = A + g lost value; for a negative value A = B names
    the bundle and g is None. exhaustive is False when only a seeded sample
    of nested pairs was checked (large ground sets).
    """

    ok: bool
    reason: str | None = None
    violation: tuple[tuple[int, ...], tuple[int, ...], int | None] | None = None
    exhaustive: bool = True

    def __bool__(self) -> bool:
        return self.ok


def _admissibility_trial(
    f: SubmodularValuation, a: int, b: int, g: int | None, exhaustive: bool
) -> SubmodularityReport | None:
    """Check one nested pair a <= b with g outside b; None means no violation."""
    va = f.value_mask(a)
    if va < 0:
        bad = tuple(goods_of(a))
        return SubmodularityReport(False, "negative value", (bad, bad, None), exhaustive)
    if g is None:
        return None
    bit = 1 << g
    gain_a = f.value_mask(a | bit) - va
    if gain_a < 0:
        return SubmodularityReport(
            False,
            "not monotone",
            (tuple(goods_of(a)), tuple(goods_of(a | bit)), g),
            exhaustive,
        )
    if b != a:
        gain_b = f.value_mask(b | bit) - f.value_mask(b)
        if gain_b > gain_a:
            return SubmodularityReport(
                False,
                "not submodular",
                (tuple(goods_of(a)), tuple(goods_of(b)), g),
                exhaustive,
            )
    return None


def verify_submodular(
    f: SubmodularValuation, samples: int = 2000, seed: int = 0
) -> SubmodularityReport:
    """Check normalization, non-negativity, monotonicity and submodularity.

    Ground sets up to 10 goods are checked exhaustively (every subset, every
    adjacent pair; an adjacent violation exists whenever any violation does,
    so this is complete). Larger ground sets get a seeded random sample of
    nested pairs, so a pass there is evidence, not proof.
    """
    m = f.m
    if f.value_mask(0) != 0:
        return SubmodularityReport(False, "empty set not worth 0", ((), (), None))
    exhaustive = m <= 10

    def trials():
        if exhaustive:
            for mask in range(1 << m):
                yield mask, mask, None
                for g in range(m):
                    if mask >> g & 1:
                        continue
                    yield mask, mask, g
                    for h in range(m):
                        if h != g and not mask >> h & 1:
                            yield mask, mask | (1 << h), g
        else:
            rng = random.Random(seed)
            for _ in range(samples):
                a = rng.getrandbits(m)
                free = [g for g in range(m) if not a >> g & 1]
                if not free:
                    yield a, a, None
                else:
                    g = rng.choice(free)
                    yield a, a | (rng.getrandbits(m) & ~a & ~(1 << g)), g

    for a, b, g in trials():
        hit = _admissibility_trial(f, a, b, g, exhaustive)
        if hit is not None:
            return hit
    return SubmodularityReport(True, exhaustive=exhaustive)


def detect_positive_mms(f: SubmodularValuation, n: int) -> bool:
    """True iff the maximin share of f over n bundles is strictly positive.

    Exact test: a monotone submodular f with f(empty) = 0 is subadditive, so
    a bundle has positive value iff it contains a positive singleton. An
    n-partition with all bundles positive therefore exists iff at least n
    goods have positive singleton value (in particular never when m < n).
    """
    if n < 1:
        raise InvalidInstanceError("need at least one agent")
    hits = 0
    for g in range(f.m):
        if f.singleton(g) > 0:
            hits += 1
            if hits >= n:
                return True
    return False
