"""Multilinear extension of a set function, exact and by Monte Carlo.

For a fractional point x in [0,1]^m, F(x) is the expected value of f on the
random bundle that contains each good g independently with probability x_g.
Exact evaluation enumerates the subsets of the fractional support (goods with
0 < x_g < 1; goods at 1 are forced in, goods at 0 are dropped), so it costs
2^support oracle calls and is for desk-scale support sizes.

The expected ordered marginal gamma_j(H, J, x) is the expected gain of good j
on top of H joined with the random lower-indexed part of J: with R drawn as
above, gamma_j = E[f(H + (R cap {j' in J : j' < j}) + j) - f(H + ...)]. These
quantities tie fractional values to integral ones: for x supported inside J,
F_H(x) equals the sum over j in J of gamma_j * x_j, shrinking J never lowers
a marginal, and at the uniform point x = (1/n, ..., 1/n) every agent's
fractional value is at least (1 - 1/e) of its maximin share.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Iterable, Sequence

from ..errors import BudgetExceededError, InvalidInstanceError
from ..model import Value, ValueLike, as_value
from .valuations import SubmodularValuation, mask_of

# 6322/10000 is a hair above 1 - 1/e, so a pass against this rational bound
# certifies the irrational inequality exactly.
ONE_MINUS_INV_E_UPPER = Fraction(6322, 10000)

_SUPPORT_BUDGET = 20


class FractionalAllocation:
    """A point x in [0,1]^m with exact rational coordinates."""

    __slots__ = ("x",)

    def __init__(self, x: Sequence[ValueLike]):
        vals = tuple(as_value(v) for v in x)
        if any(v < 0 or v > 1 for v in vals):
            raise InvalidInstanceError("coordinates must lie in [0,1]")
        self.x = vals

    @property
    def m(self) -> int:
        return len(self.x)

    def support(self) -> frozenset[int]:
        return frozenset(g for g, v in enumerate(self.x) if v != 0)

    def project(self, goods: Iterable[int]) -> "FractionalAllocation":
        """Zero out every coordinate outside the given set."""
        keep = set(goods)
        if any(not 0 <= g < self.m for g in keep):
            raise InvalidInstanceError("projection set addresses goods out of range")
        return FractionalAllocation(
            [v if g in keep else Fraction(0) for g, v in enumerate(self.x)]
        )

    @classmethod
    def uniform(cls, n: int, m: int) -> "FractionalAllocation":
        return cls([Fraction(1, n)] * m)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FractionalAllocation) and self.x == other.x

    def __repr__(self) -> str:
        return f"FractionalAllocation({[str(v) for v in self.x]})"


def _split_point(f: SubmodularValuation, x: FractionalAllocation) -> tuple[int, list[int]]:
    if x.m != f.m:
        raise InvalidInstanceError("point dimension does not match the ground set")
    ones = 0
    frac = []
    for g, v in enumerate(x.x):
        if v == 1:
            ones |= 1 << g
        elif v != 0:
            frac.append(g)
    return ones, frac


def multilinear_exact(f: SubmodularValuation, x: FractionalAllocation) -> Value:
    """Exact F(x) by enumerating subsets of the fractional support."""
    ones, frac = _split_point(f, x)
    k = len(frac)
    if k > _SUPPORT_BUDGET:
        raise BudgetExceededError("multilinear enumeration", 1 << k, 1 << _SUPPORT_BUDGET)
    total = Fraction(0)
    for sub in range(1 << k):
        weight = Fraction(1)
        mask = ones
        for t in range(k):
            p = x.x[frac[t]]
            if sub >> t & 1:
                weight *= p
                mask |= 1 << frac[t]
            else:
                weight *= 1 - p
        total += weight * f.value_mask(mask)
    return total


def multilinear_mc(
    f: SubmodularValuation,
    x: FractionalAllocation,
    samples: int,
    seed: int,
) -> tuple[Value, float]:
    """Monte Carlo estimate of F(x) with its standard error.

    Draws bundles with independent inclusions from random.Random(seed) (the
    stdlib Mersenne Twister, identical streams on every platform). Returns the
    sample mean as an exact rational and the standard error of the mean as a
    float. A deterministic x (all coordinates 0 or 1) yields the exact value
    with zero error.
    """
    if samples < 1:
        raise InvalidInstanceError("need at least one sample")
    ones, frac = _split_point(f, x)
    rng = random.Random(seed)
    probs = [float(x.x[g]) for g in frac]
    bits = [1 << g for g in frac]

    counts: dict[int, int] = {}
    for _ in range(samples):
        mask = ones
        for p, bit in zip(probs, bits):
            if rng.random() < p:
                mask |= bit
        counts[mask] = counts.get(mask, 0) + 1

    sum_v = Fraction(0)
    sum_sq = Fraction(0)
    for mask, c in counts.items():
        v = f.value_mask(mask)
        sum_v += c * v
        sum_sq += c * v * v
    mean = sum_v / samples
    if samples == 1:
        return mean, 0.0
    var = (sum_sq - samples * mean * mean) / (samples - 1)
    return mean, sqrt(float(var) / samples)


def expected_ordered_marginal(
    f: SubmodularValuation,
    h: Iterable[int],
    j_set: Iterable[int],
    j: int,
    x: FractionalAllocation,
) -> Value:
    """gamma_j(H, J, x): expected gain of j over H plus J's random lower part.

    Exact enumeration over the fractional coordinates of {j' in J : j' < j}.
    Requires j in J and J disjoint from H.
    """
    if x.m != f.m:
        raise InvalidInstanceError("point dimension does not match the ground set")
    h_mask = mask_of(h, f.m)
    js = sorted(set(j_set))
    if j not in js:
        raise InvalidInstanceError("the marginal good must belong to J")
    if h_mask & mask_of(js, f.m):
        raise InvalidInstanceError("J must be disjoint from H")
    below = [t for t in js if t < j]

    ones = 0
    frac = []
    for g in below:
        if x.x[g] == 1:
            ones |= 1 << g
        elif x.x[g] != 0:
            frac.append(g)
    k = len(frac)
    if k > _SUPPORT_BUDGET:
        raise BudgetExceededError("ordered marginal enumeration", 1 << k, 1 << _SUPPORT_BUDGET)

    jbit = 1 << j
    total = Fraction(0)
    for sub in range(1 << k):
        weight = Fraction(1)
        mask = h_mask | ones
        for t in range(k):
            p = x.x[frac[t]]
            if sub >> t & 1:
                weight *= p
                mask |= 1 << frac[t]
            else:
                weight *= 1 - p
        total += weight * (f.value_mask(mask | jbit) - f.value_mask(mask))
    return total


@dataclass(frozen=True)
class ProportionalityReport:
    """Per-agent fractional value at the uniform point versus the maximin bound."""

    values_at_uniform: tuple[Value, ...]
    bounds: tuple[Value, ...]  # (6322/10000) * mu_i
    passed: tuple[bool, ...]

    def all_passed(self) -> bool:
        return all(self.passed)


def proportionality_check(
    valuations: Sequence[SubmodularValuation], mus: Sequence[ValueLike]
) -> ProportionalityReport:
    """Check F_i(1/n, ..., 1/n) >= (1 - 1/e) * mu_i for every agent.

    The comparison uses the rational upper bound 6322/10000 > 1 - 1/e, so a
    pass is a sound certificate of the irrational inequality.
    """
    if len(valuations) != len(mus):
        raise InvalidInstanceError("need one maximin value per agent")
    n = len(valuations)
    vals = []
    bounds = []
    passed = []
    for v, mu in zip(valuations, mus):
        point = FractionalAllocation.uniform(n, v.m)
        fv = multilinear_exact(v, point)
        bound = ONE_MINUS_INV_E_UPPER * as_value(mu)
        vals.append(fv)
        bounds.append(bound)
        passed.append(fv >= bound)
    return ProportionalityReport(
        values_at_uniform=tuple(vals), bounds=tuple(bounds), passed=tuple(passed)
    )
