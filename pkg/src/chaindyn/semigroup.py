"""Numerical-semigroup arithmetic backing chain-length realizability.

Given coprime cycle lengths, every sufficiently large integer is a
non-negative combination of them; :func:`frobenius_bound` computes the
least such threshold by dynamic programming, certified by a run of
``min(generators)`` consecutive representable values.  Inputs are capped
at desk scale (generators <= 10^4, bound search <= 10^8).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidParameterError, NotCoprimeError, ResourceLimitError

MAX_GENERATOR = 10_000
MAX_BOUND_SEARCH = 100_000_000


@dataclass(frozen=True)
class GeneratorSet:
    """A non-empty set of positive integers, stored sorted and deduplicated."""

    generators: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise InvalidParameterError("at least one generator required")
        normalized = tuple(sorted(set(self.generators)))
        if normalized[0] < 1:
            raise InvalidParameterError("generators must be >= 1")
        if normalized[-1] > MAX_GENERATOR:
            raise ResourceLimitError(f"generators are capped at {MAX_GENERATOR}")
        object.__setattr__(self, "generators", normalized)

    @classmethod
    def of(cls, values: Iterable[int]) -> "GeneratorSet":
        return cls(tuple(values))

    @property
    def smallest(self) -> int:
        return self.generators[0]


def gcd_set(g: GeneratorSet) -> int:
    return math.gcd(*g.generators) if len(g.generators) > 1 else g.generators[0]


def representable(s: int, g: GeneratorSet) -> bool:
    """True when s is a non-negative integer combination of the generators."""
    if s < 0:
        return False
    table = bytearray(s + 1)
    table[0] = 1
    for t in range(1, s + 1):
        for a in g.generators:
            if a > t:
                break
            if table[t - a]:
                table[t] = 1
                break
    return bool(table[s])


def frobenius_bound(g: GeneratorSet) -> int:
    """Least N such that every integer s >= N is representable.

    Equals the Frobenius number plus one.  The DP scans upward and stops
    once ``min(g)`` consecutive representable values appear: from there on
    every integer is one of those values plus a multiple of min(g).
    Raises :class:`NotCoprimeError` when gcd > 1 (no such N exists).
    """
    if gcd_set(g) != 1:
        raise NotCoprimeError("generators must have gcd 1")
    smallest = g.smallest
    if smallest == 1:
        return 0
    table = bytearray(1)
    table[0] = 1
    last_false = -1
    t = 0
    while True:
        t += 1
        if t > MAX_BOUND_SEARCH:
            raise ResourceLimitError(
                f"bound search exceeded {MAX_BOUND_SEARCH}"
            )
        table.append(0)
        for a in g.generators:
            if a > t:
                break
            if table[t - a]:
                table[t] = 1
                break
        if not table[t]:
            last_false = t
        elif t - last_false >= smallest:
            return last_false + 1


def realizable_length_bound(cycle_lengths: GeneratorSet, diameter: int) -> int:
    """Threshold M + N beyond which chains of every length exist.

    ``N`` is the Frobenius bound of the cycle lengths through a point and
    ``M`` the chain diameter: any target length above M + N splits into a
    loop at the point (length >= N) plus a connecting chain (length <= M).
    """
    if diameter < 1:
        raise InvalidParameterError("diameter must be >= 1")
    return frobenius_bound(cycle_lengths) + diameter
