"""
Exact domain model for connected cake cutting.

The cake is the unit interval [0, 1]. Each agent holds a piecewise-constant
density given as an ordered list of segments; every number is a
``fractions.Fraction`` so that strict comparisons such as V_i(X_i) > w_i are
decided exactly.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Iterator, Optional, Sequence, Tuple

from .errors import DomainError, InvalidInstanceError

Rational = Fraction

# A mark query either lands on a point of the cake or cannot be satisfied.
MarkResult = Optional[Fraction]
UNREACHABLE: MarkResult = None

ZERO = Fraction(0)
ONE = Fraction(1)


def exact(value, what: str = "value") -> Fraction:
    """Coerce ints and Fractions; refuse floats and anything inexact."""
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise InvalidInstanceError(f"{what} must be an int or Fraction, got {value!r}")
    return Fraction(value)


def check_point(x: Fraction, what: str = "point") -> Fraction:
    x = exact(x, what)
    if not ZERO <= x <= ONE:
        raise DomainError(f"{what} {x} lies outside the cake [0, 1]")
    return x


@dataclass(frozen=True)
class Segment:
    """A homogeneous region: its length on the cake and its total value."""

    width: Fraction
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "width", exact(self.width, "segment width"))
        object.__setattr__(self, "value", exact(self.value, "segment value"))
        if self.width <= 0:
            raise InvalidInstanceError(f"segment width must be positive, got {self.width}")
        if self.value < 0:
            raise InvalidInstanceError(f"segment value must be non-negative, got {self.value}")


@dataclass(frozen=True)
class Valuation:
    """
    Piecewise-constant valuation normalized to V(C) = 1.

    ``scale`` remembers the total of the unnormalized weights the valuation was
    built from (1 when it was given normalized).
    """

    segments: Tuple[Segment, ...]
    scale: Fraction = ONE
    _points: Tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    _levels: Tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise InvalidInstanceError("a valuation needs at least one segment")
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "scale", exact(self.scale, "scale"))

        points = tuple(accumulate((s.width for s in segments), initial=ZERO))
        levels = tuple(accumulate((s.value for s in segments), initial=ZERO))
        if points[-1] != ONE:
            raise InvalidInstanceError(f"segment widths sum to {points[-1]}, expected 1")
        if levels[-1] != ONE:
            raise InvalidInstanceError(f"segment values sum to {levels[-1]}, expected 1")
        object.__setattr__(self, "_points", points)
        object.__setattr__(self, "_levels", levels)

    @classmethod
    def uniform(cls) -> "Valuation":
        return cls((Segment(ONE, ONE),))

    @classmethod
    def from_weights(
        cls,
        values: Sequence,
        widths: Optional[Sequence] = None,
    ) -> "Valuation":
        """Normalize non-negative weights by their sum; equal widths unless given."""
        weights = [exact(v, "segment value") for v in values]
        if not weights:
            raise InvalidInstanceError("a valuation needs at least one segment")
        if any(v < 0 for v in weights):
            raise InvalidInstanceError("segment values must be non-negative")
        total = sum(weights, ZERO)
        if total <= 0:
            raise InvalidInstanceError("a valuation needs some positive value")
        if widths is None:
            lengths = [Fraction(1, len(weights))] * len(weights)
        else:
            lengths = [exact(w, "segment width") for w in widths]
            if len(lengths) != len(weights):
                raise InvalidInstanceError("widths and values differ in length")
        return cls(
            tuple(Segment(w, v / total) for w, v in zip(lengths, weights)),
            scale=total,
        )

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return self._points

    def hungry(self) -> bool:
        return all(s.value > 0 for s in self.segments)

    def cumulative(self, x: Fraction) -> Fraction:
        """F(x) = V([0, x])."""
        x = check_point(x, "x")
        k = min(bisect_right(self._points, x) - 1, len(self.segments) - 1)
        seg = self.segments[k]
        return self._levels[k] + seg.value * (x - self._points[k]) / seg.width

    def value_of(self, a: Fraction, b: Fraction) -> Fraction:
        """V([a, b]) = F(b) - F(a)."""
        if exact(a, "a") > exact(b, "b"):
            raise DomainError(f"interval [{a}, {b}] is reversed")
        return self.cumulative(b) - self.cumulative(a)

    def right_mark(self, x: Fraction, r: Fraction) -> MarkResult:
        """Largest z with V([x, z]) = r, or UNREACHABLE when V([x, 1]) < r."""
        r = _mark_value(r)
        target = self.cumulative(x) + r
        if target > ONE:
            return UNREACHABLE
        k = bisect_right(self._levels, target) - 1
        if self._levels[k] == target:
            return self._points[k]
        return self._interpolate(k, target)

    def left_mark(self, x: Fraction, r: Fraction) -> MarkResult:
        """Smallest z >= x with V([x, z]) = r, or UNREACHABLE when V([x, 1]) < r."""
        r = _mark_value(r)
        base = self.cumulative(x)
        if r == 0:
            return Fraction(x)
        target = base + r
        if target > ONE:
            return UNREACHABLE
        k = bisect_left(self._levels, target)
        if self._levels[k] == target:
            return self._points[k]
        return self._interpolate(k - 1, target)

    def mirrored(self) -> "Valuation":
        return Valuation(tuple(reversed(self.segments)), scale=self.scale)

    def _interpolate(self, k: int, target: Fraction) -> Fraction:
        # segment k has positive value and levels[k] < target < levels[k + 1]
        seg = self.segments[k]
        return self._points[k] + (target - self._levels[k]) * seg.width / seg.value


def _mark_value(r) -> Fraction:
    r = exact(r, "mark value")
    if r < 0:
        raise DomainError(f"mark value must be non-negative, got {r}")
    return r


def cumulative(v: Valuation, x: Fraction) -> Fraction:
    return v.cumulative(x)


def value_of(v: Valuation, a: Fraction, b: Fraction) -> Fraction:
    return v.value_of(a, b)


@dataclass(frozen=True)
class Instance:
    """n agents' valuations together with entitlements summing to exactly 1."""

    valuations: Tuple[Valuation, ...]
    entitlements: Tuple[Fraction, ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        valuations = tuple(self.valuations)
        entitlements = tuple(exact(w, "entitlement") for w in self.entitlements)
        if not valuations:
            raise InvalidInstanceError("an instance needs at least one agent")
        if len(entitlements) != len(valuations):
            raise InvalidInstanceError(
                f"{len(valuations)} valuations but {len(entitlements)} entitlements"
            )
        if any(w <= 0 for w in entitlements):
            raise InvalidInstanceError("entitlements must be positive")
        if sum(entitlements, ZERO) != ONE:
            raise InvalidInstanceError(
                f"entitlements sum to {sum(entitlements, ZERO)}, expected 1"
            )
        names = tuple(self.names) or tuple(f"agent{i}" for i in range(len(valuations)))
        if len(names) != len(valuations):
            raise InvalidInstanceError("one name per agent is required")
        object.__setattr__(self, "valuations", valuations)
        object.__setattr__(self, "entitlements", entitlements)
        object.__setattr__(self, "names", names)

    @classmethod
    def with_equal_entitlements(
        cls, valuations: Sequence[Valuation], names: Sequence[str] = ()
    ) -> "Instance":
        n = len(valuations)
        if n == 0:
            raise InvalidInstanceError("an instance needs at least one agent")
        return cls(tuple(valuations), (Fraction(1, n),) * n, tuple(names))

    @classmethod
    def uniform(cls, n: int) -> "Instance":
        return cls.with_equal_entitlements([Valuation.uniform()] * n)

    @property
    def n(self) -> int:
        return len(self.valuations)

    def equal_entitlements(self) -> bool:
        return all(w == Fraction(1, self.n) for w in self.entitlements)

    def all_hungry(self) -> bool:
        return all(v.hungry() for v in self.valuations)


@dataclass(frozen=True)
class Allocation:
    """
    Connected allocation: agent ``order[k]`` receives [cuts[k], cuts[k + 1]].

    Only the shape is enforced here; whether the cuts are ordered and span the
    cake is reported by the verifier rather than raised.
    """

    cuts: Tuple[Fraction, ...]
    order: Tuple[int, ...]

    def __post_init__(self):
        cuts = tuple(exact(c, "cut") for c in self.cuts)
        order = tuple(self.order)
        if len(cuts) != len(order) + 1:
            raise InvalidInstanceError(
                f"{len(order)} pieces need {len(order) + 1} cuts, got {len(cuts)}"
            )
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    def pieces(self) -> Iterator[Tuple[int, Fraction, Fraction]]:
        for k, agent in enumerate(self.order):
            yield agent, self.cuts[k], self.cuts[k + 1]

    def piece_of(self, agent: int) -> Tuple[Fraction, Fraction]:
        k = self.order.index(agent)
        return self.cuts[k], self.cuts[k + 1]

    def is_connected(self) -> bool:
        ordered = all(a <= b for a, b in zip(self.cuts, self.cuts[1:]))
        return ordered and sorted(self.order) == list(range(self.n))

    def covers_cake(self) -> bool:
        return self.cuts[0] == ZERO and self.cuts[-1] == ONE
