"""
Existence decisions for connected (strongly-)proportional allocations.

All algorithms receive an :class:`~src.oracle.Oracle` (or anything exposing the
same query methods, such as :class:`~src.oracle.MirrorSimulation`) and never
touch valuations directly, so the ledger snapshot attached to each
:class:`Decision` is the exact query cost of the run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, PreconditionError
from .model import ONE, UNREACHABLE, ZERO, MarkResult, exact
from .oracle import LedgerSnapshot

logger = logging.getLogger(__name__)

STRONG = "strong"
PROPORTIONAL = "proportional"
PLUS_Z = "plus_z"
MODES = (STRONG, PROPORTIONAL, PLUS_Z)


def hungry_equal_budget(n: int) -> int:
    return n * (n - 1)


def subset_dp_budget(n: int) -> int:
    return n * 2 ** (n - 1) if n > 0 else 0


@dataclass(frozen=True)
class MarkChain:
    """Points x_0..x_k reached by a sequential mark chain; complete when k = n."""

    points: Tuple[Fraction, ...]
    order: Tuple[int, ...]

    @property
    def complete(self) -> bool:
        return len(self.points) == len(self.order) + 1

    @property
    def end(self) -> MarkResult:
        return self.points[-1] if self.complete else UNREACHABLE


@dataclass(frozen=True)
class Decision:
    """
    Outcome of one decision run. Subset-DP decisions that succeed carry the
    witness ``order`` and its chain ``marks``; the hungry-equal decision carries
    ``disagreement = (t, i, j)`` instead, the t/n-mark on which agents i and j differ.
    """

    exists: bool
    mode: str
    algorithm: str
    queries: LedgerSnapshot
    order: Optional[Tuple[int, ...]] = None
    marks: Optional[Tuple[Fraction, ...]] = None
    z: Optional[Fraction] = None
    disagreement: Optional[Tuple[int, int, int]] = None


@dataclass
class BestMarkTable:
    """
    Subset DP state keyed by agent bitmask.

    ``best[mask]`` is the smallest chain end reachable by some ordering of the
    agents in ``mask`` (UNREACHABLE when none is), and ``arg[mask]`` is the agent
    that marked last in that ordering.
    """

    n: int
    best: Dict[int, MarkResult] = field(default_factory=lambda: {0: ZERO})
    arg: Dict[int, Optional[int]] = field(default_factory=lambda: {0: None})

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def record(self, mask: int, value: MarkResult, agent: Optional[int]) -> None:
        self.best[mask] = value
        self.arg[mask] = agent

    def order_for(self, mask: int) -> Tuple[int, ...]:
        """Backtrack the arg-agents of a reachable mask into a marking order."""
        if self.best.get(mask) is UNREACHABLE:
            raise DomainError(f"no ordering reaches subset {mask:#b}")
        order: List[int] = []
        while mask:
            agent = self.arg[mask]
            order.append(agent)
            mask ^= 1 << agent
        return tuple(reversed(order))

    def marks_for(self, order: Sequence[int]) -> Tuple[Fraction, ...]:
        """Chain points along ``order``; they are the table entries of its prefixes."""
        mask, points = 0, [self.best[0]]
        for agent in order:
            mask |= 1 << agent
            points.append(self.best[mask])
        return tuple(points)


def _check_permutation(sigma: Sequence[int], n: int) -> Tuple[int, ...]:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)) or any(isinstance(i, bool) for i in sigma):
        raise DomainError(f"{sigma} is not a permutation of 0..{n - 1}")
    return sigma


def mark_sequence(oracle, sigma: Sequence[int], x: Fraction, r: Sequence[Fraction],
                  left: bool = False) -> MarkChain:
    """
    Sequential marks: agent sigma[k] marks r[sigma[k]] starting where sigma[k-1]
    stopped. Stops at the first UNREACHABLE; a target above 1 is unreachable
    without spending a query. At most n mark queries.
    """
    sigma = _check_permutation(sigma, oracle.n)
    if len(r) != oracle.n:
        raise DomainError(f"expected {oracle.n} mark values, got {len(r)}")
    mark = oracle.left_mark if left else oracle.right_mark
    points = [exact(x, "x")]
    for agent in sigma:
        target = exact(r[agent], "mark value")
        if target > ONE:
            break
        point = mark(agent, points[-1], target)
        if point is UNREACHABLE:
            break
        points.append(point)
    return MarkChain(tuple(points), sigma)


def _require_hungry_equal(oracle) -> None:
    n = oracle.n
    if any(w != Fraction(1, n) for w in oracle.entitlements):
        raise PreconditionError("entitlements must all equal 1/n")
    hungry = [oracle.is_hungry(i) for i in range(n)]
    if not all(hungry):
        raise PreconditionError(f"agent {hungry.index(False)} is not hungry")


def decide_hungry_equal(oracle) -> Decision:
    """
    Hungry agents with equal entitlements: an allocation exists iff two agents
    disagree on some t/n-mark. Agent 0 marks first and the others are compared
    against it, so a negative answer costs exactly n(n - 1) mark queries.
    """
    _require_hungry_equal(oracle)
    n = oracle.n
    start = oracle.ledger.snapshot()
    for t in range(1, n):
        r = Fraction(t, n)
        reference = oracle.right_mark(0, ZERO, r)
        for i in range(1, n):
            if oracle.right_mark(i, ZERO, r) != reference:
                queries = oracle.ledger.snapshot() - start
                logger.info(f"hungry-equal: n={n} agents 0 and {i} disagree on the {t}/{n}-mark "
                            f"({queries.total()} queries)")
                return Decision(True, STRONG, "hungry_equal", queries, disagreement=(t, 0, i))
    queries = oracle.ledger.snapshot() - start
    logger.info(f"hungry-equal: n={n} all marks agree ({queries.total()} queries)")
    return Decision(False, STRONG, "hungry_equal", queries)


def best_mark_table(oracle, targets: Sequence[Fraction], left: bool = False) -> BestMarkTable:
    """
    Fill b_N for every agent subset, smallest subsets first. Marks from an
    UNREACHABLE predecessor or towards a target above 1 are skipped without a
    query; ties keep the lowest agent index.
    """
    n = oracle.n
    mark = oracle.left_mark if left else oracle.right_mark
    table = BestMarkTable(n)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            mask = sum(1 << i for i in subset)
            best, arg = UNREACHABLE, None
            for i in subset:
                previous = table.best[mask ^ (1 << i)]
                if previous is UNREACHABLE or targets[i] > ONE:
                    continue
                point = mark(i, previous, targets[i])
                if point is not UNREACHABLE and (best is UNREACHABLE or point < best):
                    best, arg = point, i
            table.record(mask, best, arg)
        logger.debug(f"subset DP: filled all subsets of size {size}")
    return table


def _decide_by_table(oracle, targets, mode, algorithm, left=False, z=None) -> Decision:
    start = oracle.ledger.snapshot()
    table = best_mark_table(oracle, targets, left=left)
    end = table.best[table.full]
    if left:
        exists = end is not UNREACHABLE
    else:
        exists = end is not UNREACHABLE and end < ONE
    queries = oracle.ledger.snapshot() - start
    order = marks = None
    if exists:
        order = table.order_for(table.full)
        marks = table.marks_for(order)
    logger.info(f"{algorithm}: n={oracle.n} exists={exists} end={end} "
                f"({queries.total()} queries)")
    return Decision(exists, mode, algorithm, queries, order=order, marks=marks, z=z)


def decide_general(oracle) -> Decision:
    """Connected strongly-proportional existence for any instance, n * 2^(n-1) queries at most."""
    return _decide_by_table(oracle, oracle.entitlements, STRONG, "subset_dp")


def decide_plus_z(oracle, z: Fraction) -> Decision:
    z = exact(z, "z")
    if z <= 0:
        raise PreconditionError(f"z must be positive, got {z}; use decide_general for z = 0")
    targets = tuple(w + z for w in oracle.entitlements)
    return _decide_by_table(oracle, targets, PLUS_Z, "subset_dp_plus_z", z=z)


def decide_proportional(oracle) -> Decision:
    return _decide_by_table(oracle, oracle.entitlements, PROPORTIONAL, "subset_dp_left",
                            left=True)


def _disjoint(first: Tuple[Fraction, Fraction], second: Tuple[Fraction, Fraction]) -> bool:
    return first[1] < second[0] or second[1] < first[0]


def _mark_intervals(oracle, r: Fraction):
    return [oracle.mark_interval(i, r) for i in range(oracle.n)]


def _require_equal(oracle) -> None:
    if any(w != Fraction(1, oracle.n) for w in oracle.entitlements):
        raise PreconditionError("entitlements must all equal 1/n")


def necessary_condition(oracle) -> bool:
    """Some t/n has two agents whose intervals of t/n-marks are disjoint."""
    _require_equal(oracle)
    n = oracle.n
    for t in range(1, n):
        intervals = _mark_intervals(oracle, Fraction(t, n))
        if any(_disjoint(intervals[i], intervals[j]) for i, j in combinations(range(n), 2)):
            return True
    return False


def sufficient_condition(oracle) -> bool:
    """Some t/n has the intervals of t/n-marks of all agents pairwise disjoint."""
    _require_equal(oracle)
    n = oracle.n
    for t in range(1, n):
        intervals = _mark_intervals(oracle, Fraction(t, n))
        if all(_disjoint(intervals[i], intervals[j]) for i, j in combinations(range(n), 2)):
            return True
    return False


def subset_sums(w: Sequence[Fraction]) -> List[Fraction]:
    """Sums of all 2^n subsets, indexed by bitmask."""
    sums = [ZERO]
    for value in w:
        sums += [s + value for s in sums]
    return sums


def is_generic(w: Sequence[Fraction]) -> bool:
    """True when all subset sums are pairwise distinct."""
    sums = subset_sums([exact(v, "entitlement") for v in w])
    return len(set(sums)) == len(sums)


def min_subset_gap(w: Sequence[Fraction]) -> Fraction:
    """Smallest difference between the sums of two different subsets; 0 if not generic."""
    sums = sorted(subset_sums([exact(v, "entitlement") for v in w]))
    return min((b - a for a, b in zip(sums, sums[1:])), default=ZERO)


def query_lower_bound(w: Sequence[Fraction]) -> Fraction:
    """
    Half the sum over agents i of the number of distinct values w_N taken over
    non-empty subsets N that exclude i.
    """
    w = [exact(v, "entitlement") for v in w]
    total = 0
    for i in range(len(w)):
        others = w[:i] + w[i + 1:]
        total += len(set(subset_sums(others))) - 1
    return Fraction(total, 2)
