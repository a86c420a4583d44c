"""
Ground truth for small instances: exhaustive enumeration of marking orders,
computed directly on the valuations with no query accounting.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence, Tuple

import numpy as np

from .decision import PLUS_Z, PROPORTIONAL, STRONG
from .errors import DomainError, EnumerationCapError
from .model import ONE, UNREACHABLE, ZERO, Instance, MarkResult, Valuation, exact

logger = logging.getLogger(__name__)

DEFAULT_CAP = 8


def _targets(instance: Instance, mode: str, z: Optional[Fraction]) -> Tuple[Fraction, ...]:
    if mode not in (STRONG, PROPORTIONAL, PLUS_Z):
        raise DomainError(f"unknown mode {mode!r}")
    shift = exact(z, "z") if mode == PLUS_Z and z is not None else ZERO
    return tuple(w + shift for w in instance.entitlements)


def chain_end(instance: Instance, order: Sequence[int], targets: Sequence[Fraction],
              left: bool = False) -> MarkResult:
    x = ZERO
    for agent in order:
        if targets[agent] > ONE:
            return UNREACHABLE
        valuation = instance.valuations[agent]
        x = valuation.left_mark(x, targets[agent]) if left else valuation.right_mark(
            x, targets[agent])
        if x is UNREACHABLE:
            return UNREACHABLE
    return x


def exists_by_enumeration(instance: Instance, mode: str = STRONG,
                          z: Optional[Fraction] = None, cap: int = DEFAULT_CAP) -> bool:
    """
    Try every order: strong and plus-z modes need a rightmost-mark chain ending
    strictly before 1, proportional mode a complete leftmost-mark chain.
    """
    if instance.n > cap:
        raise EnumerationCapError(f"{instance.n} agents exceed the enumeration cap of {cap}")
    targets = _targets(instance, mode, z)
    left = mode == PROPORTIONAL
    for order in permutations(range(instance.n)):
        end = chain_end(instance, order, targets, left=left)
        if end is UNREACHABLE:
            continue
        if left or end < ONE:
            logger.debug(f"enumeration: order {order} ends at {end}")
            return True
    return False


@dataclass(frozen=True)
class MisuseReport:
    order: Tuple[int, ...]
    left_end: MarkResult
    right_end: MarkResult
    strong_exists: bool

    @property
    def demonstrated(self) -> bool:
        """The leftmost-mark chain ends early although no allocation exists."""
        return (self.left_end is not UNREACHABLE and self.left_end < ONE
                and not self.strong_exists)


def left_mark_misuse_demo(instance: Instance, order: Sequence[int] = (2, 0, 1)) -> MisuseReport:
    """
    Compare the entitlement chain along ``order`` computed with leftmost and with
    rightmost marks. Leftmost marks can end before 1 on instances where no
    strongly-proportional allocation exists.
    """
    order = tuple(order)
    targets = instance.entitlements
    return MisuseReport(
        order,
        chain_end(instance, order, targets, left=True),
        chain_end(instance, order, targets),
        exists_by_enumeration(instance, STRONG, cap=max(DEFAULT_CAP, instance.n)),
    )


def random_valuation(rng: np.random.Generator, max_segments: int = 6,
                     max_denominator: int = 12, zero_probability: float = 0.2) -> Valuation:
    """
    Widths are multiples of 1/max_denominator; values are integer weights up to
    max_denominator, normalised by their total.
    """
    k = int(rng.integers(1, min(max_segments, max_denominator) + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, max_denominator), size=k - 1,
                                             replace=False))
    bounds = [0] + cuts + [max_denominator]
    widths = [Fraction(b - a, max_denominator) for a, b in zip(bounds, bounds[1:])]
    values = [int(v) for v in rng.integers(1, max_denominator + 1, size=k)]
    if k > 1:
        zeros = rng.random(k) < zero_probability
        values = [0 if zero else v for v, zero in zip(values, zeros)]
    if not any(values):
        values[int(rng.integers(0, k))] = 1
    return Valuation.from_weights(values, widths)


def random_instance(rng: np.random.Generator, n: int, max_segments: int = 6,
                    max_denominator: int = 12, zero_probability: float = 0.2,
                    equal_entitlements: bool = False) -> Instance:
    """Small random rational instance; draws are reproducible from the generator's seed."""
    valuations = [
        random_valuation(rng, max_segments, max_denominator, zero_probability)
        for _ in range(n)
    ]
    if equal_entitlements:
        return Instance.with_equal_entitlements(valuations)
    weights = [int(w) for w in rng.integers(1, max_denominator + 1, size=n)]
    total = sum(weights)
    return Instance(tuple(valuations), tuple(Fraction(w, total) for w in weights))
