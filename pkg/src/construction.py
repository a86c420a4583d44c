"""
Construction of connected allocations from positive decisions, plus the exact
off-oracle verifier used to certify them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .decision import (
    PLUS_Z,
    PROPORTIONAL,
    STRONG,
    Decision,
    decide_general,
    decide_hungry_equal,
    decide_plus_z,
    decide_proportional,
    mark_sequence,
)
from .errors import DomainError, InvalidInstanceError, PreconditionError
from .model import ONE, UNREACHABLE, ZERO, Allocation, Instance, exact

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifierReport:
    connected: bool
    covers_cake: bool
    values: Tuple[Fraction, ...]
    targets: Tuple[Fraction, ...]
    strict: Tuple[bool, ...]
    weak: Tuple[bool, ...]
    mode: str
    z: Optional[Fraction] = None

    @property
    def structural(self) -> bool:
        return self.connected and self.covers_cake

    @property
    def satisfied(self) -> bool:
        if not self.structural:
            return False
        return all(self.weak) if self.mode == PROPORTIONAL else all(self.strict)


def verify(instance: Instance, allocation: Allocation, mode: str = STRONG,
           z: Optional[Fraction] = None) -> VerifierReport:
    """
    Exact check of an allocation against an instance, computed on the
    valuations themselves. Structural defects are reported, not raised; only an
    agent-count mismatch is an error.
    """
    if mode not in (STRONG, PROPORTIONAL, PLUS_Z):
        raise DomainError(f"unknown mode {mode!r}")
    if allocation.n != instance.n:
        raise InvalidInstanceError(
            f"allocation has {allocation.n} pieces for {instance.n} agents"
        )
    z = exact(z, "z") if z is not None else None
    shift = (z or ZERO) if mode == PLUS_Z else ZERO
    targets = tuple(w + shift for w in instance.entitlements)

    connected = allocation.is_connected()
    covers = allocation.covers_cake()
    in_range = all(ZERO <= c <= ONE for c in allocation.cuts)
    if not (connected and in_range):
        n = instance.n
        return VerifierReport(connected, covers, (), targets, (False,) * n, (False,) * n,
                              mode, z)

    values = tuple(
        instance.valuations[i].value_of(*allocation.piece_of(i)) for i in range(instance.n)
    )
    return VerifierReport(
        connected,
        covers,
        values,
        targets,
        tuple(v > t for v, t in zip(values, targets)),
        tuple(v >= t for v, t in zip(values, targets)),
        mode,
        z,
    )


def even_paz(oracle, agents: Sequence[int], a: Fraction, b: Fraction) -> Allocation:
    """
    Connected proportional division of [a, b] among ``agents`` by recursive
    halving. Every agent evaluates [a, b] once; afterwards each agent only
    marks, and is guaranteed at least V_i([a, b]) / len(agents).
    """
    agents = tuple(agents)
    a, b = exact(a, "a"), exact(b, "b")
    if not agents:
        raise PreconditionError("even_paz needs at least one agent")
    if not a < b:
        raise PreconditionError(f"subcake [{a}, {b}] is empty")
    shares = {}
    for i in agents:
        shares[i] = oracle.eval(i, a, b)
        if shares[i] <= 0:
            raise PreconditionError(f"agent {i} values [{a}, {b}] at 0")
    cuts, order = _halve(oracle, agents, a, b, shares)
    return Allocation(tuple(cuts), tuple(order))


def _halve(oracle, agents, a, b, shares) -> Tuple[List[Fraction], List[int]]:
    # shares[i] is a lower bound on V_i([a, b])
    k = len(agents)
    if k == 1:
        return [a, b], [agents[0]]
    k1 = k // 2
    marks = []
    for i in agents:
        point = oracle.right_mark(i, a, shares[i] * k1 / k)
        marks.append((min(point, b), i))
    marks.sort()
    cut = marks[k1 - 1][0]
    left = [i for _, i in marks[:k1]]
    right = [i for _, i in marks[k1:]]
    left_shares = {i: shares[i] * k1 / k for i in left}
    right_shares = {i: shares[i] * (k - k1) / k for i in right}
    left_cuts, left_order = _halve(oracle, left, a, cut, left_shares)
    right_cuts, right_order = _halve(oracle, right, cut, b, right_shares)
    return left_cuts + right_cuts[1:], left_order + right_order


def strengthen(oracle, allocation: Allocation,
               targets: Optional[Sequence[Fraction]] = None) -> Allocation:
    """
    Turn a connected proportional allocation of hungry agents with at least one
    strict agent into a strongly-proportional one with the same piece order.

    Each round takes the leftmost adjacent (strict, exact) pair and moves their
    shared boundary halfway towards the point where the strict agent would be
    left with exactly its target: n evals up front, then one mark and two evals
    per round.
    """
    targets = tuple(oracle.entitlements if targets is None else targets)
    n = allocation.n
    if n != oracle.n or not allocation.is_connected() or not allocation.covers_cake():
        raise PreconditionError("strengthen needs a connected allocation of the whole cake")
    for i in range(n):
        if not oracle.is_hungry(i):
            raise PreconditionError(f"agent {i} is not hungry")

    cuts = list(allocation.cuts)
    order = allocation.order
    values = [oracle.eval(order[k], cuts[k], cuts[k + 1]) for k in range(n)]
    if any(values[k] < targets[order[k]] for k in range(n)):
        raise PreconditionError("input allocation is not proportional")
    strict = [values[k] > targets[order[k]] for k in range(n)]
    if not any(strict):
        raise PreconditionError("no agent is strictly above its target")

    while not all(strict):
        k = next(k for k in range(n - 1) if strict[k] != strict[k + 1])
        i, j = order[k], order[k + 1]
        z0, z1, z2 = cuts[k], cuts[k + 1], cuts[k + 2]
        if strict[k]:
            # left piece has slack: find where it is worth exactly its target
            y = oracle.right_mark(i, z0, targets[i])
            boundary = (y + z1) / 2
        else:
            y = oracle.right_mark(j, z1, values[k + 1] - targets[j])
            boundary = (z1 + y) / 2
        cuts[k + 1] = boundary
        values[k] = oracle.eval(i, z0, boundary)
        values[k + 1] = oracle.eval(j, boundary, z2)
        strict[k] = values[k] > targets[i]
        strict[k + 1] = values[k + 1] > targets[j]
        logger.debug(f"strengthen: boundary {k + 1} moved from {z1} to {boundary}")

    if cuts == list(allocation.cuts):
        return allocation
    return Allocation(tuple(cuts), order)


def _construct_from_disagreement(oracle, decision: Decision) -> Allocation:
    n = oracle.n
    t = decision.disagreement[0]
    r = Fraction(t, n)
    marks = sorted((oracle.right_mark(i, ZERO, r), i) for i in range(n))
    x = marks[t - 1][0]
    first = [i for _, i in marks[:t]]
    second = [i for _, i in marks[t:]]
    left = even_paz(oracle, first, ZERO, x)
    right = even_paz(oracle, second, x, ONE)
    proportional = Allocation(left.cuts + right.cuts[1:], left.order + right.order)
    logger.debug(f"hungry-equal: split at the {t}/{n}-mark {x}")
    return strengthen(oracle, proportional)


def construct_hungry_equal(oracle) -> Optional[Allocation]:
    """Split at a disputed t/n-mark, divide both sides proportionally, then strengthen."""
    decision = decide_hungry_equal(oracle)
    if not decision.exists:
        return None
    return _construct_from_disagreement(oracle, decision)


def construct_from_witness(oracle, sigma: Sequence[int],
                           targets: Optional[Sequence[Fraction]] = None) -> Allocation:
    """
    Backward construction from an order whose rightmost-mark chain ends before 1.

    With chain points x_0..x_n, cuts are placed from the right: agent sigma[k]
    has slack eps = V([x_k, y_{k+1}]) - target on [x_k, y_{k+1}] and hands half
    of it to its left neighbour by cutting at its eps/2-mark from x_k.
    """
    targets = tuple(oracle.entitlements if targets is None else targets)
    chain = mark_sequence(oracle, sigma, ZERO, targets)
    if chain.end is UNREACHABLE or chain.end >= ONE:
        raise PreconditionError(f"order {tuple(sigma)} is not a witness: chain ends at "
                                f"{'unreachable' if chain.end is None else chain.end}")
    sigma, xs, n = chain.order, chain.points, oracle.n
    cuts = [ZERO] * n + [ONE]
    for k in range(n - 1, 0, -1):
        agent = sigma[k]
        slack = oracle.eval(agent, xs[k], cuts[k + 1]) - targets[agent]
        if slack <= 0:
            raise PreconditionError(f"agent {agent} has no slack on its piece")
        cuts[k] = oracle.right_mark(agent, xs[k], slack / 2)
    return Allocation(tuple(cuts), sigma)


def construct_plus_z(oracle, sigma: Sequence[int], z: Fraction) -> Allocation:
    z = exact(z, "z")
    if z < 0:
        raise PreconditionError(f"z must be non-negative, got {z}")
    return construct_from_witness(oracle, sigma, [w + z for w in oracle.entitlements])


def construct_proportional(oracle, order: Sequence[int]) -> Allocation:
    """Connected proportional allocation from a complete leftmost-mark chain."""
    chain = mark_sequence(oracle, order, ZERO, oracle.entitlements, left=True)
    if chain.end is UNREACHABLE:
        raise PreconditionError(f"order {tuple(order)} does not reach the end of the chain")
    return Allocation(chain.points[:-1] + (ONE,), chain.order)


def solve(oracle, mode: str = STRONG, z: Optional[Fraction] = None,
          hungry_equal: bool = False) -> Tuple[Decision, Optional[Allocation]]:
    """Decide, then construct when an allocation exists."""
    if hungry_equal:
        decision = decide_hungry_equal(oracle)
    elif mode == STRONG:
        decision = decide_general(oracle)
    elif mode == PLUS_Z:
        decision = decide_plus_z(oracle, z)
    elif mode == PROPORTIONAL:
        decision = decide_proportional(oracle)
    else:
        raise DomainError(f"unknown mode {mode!r}")

    if not decision.exists:
        return decision, None
    if hungry_equal:
        allocation = _construct_from_disagreement(oracle, decision)
    elif mode == PLUS_Z:
        allocation = construct_plus_z(oracle, decision.order, decision.z)
    elif mode == PROPORTIONAL:
        allocation = construct_proportional(oracle, decision.order)
    else:
        allocation = construct_from_witness(oracle, decision.order)
    return decision, allocation
