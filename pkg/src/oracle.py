"""
Robertson-Webb query access with strict accounting.

Every decision and construction algorithm talks to valuations only through an
:class:`Oracle`; each eval, right-mark or left-mark call that passes validation
costs exactly one query on the agent's ledger row.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .model import ONE, UNREACHABLE, Instance, MarkResult
from .query_base import QueryBase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerSnapshot:
    """Immutable per-agent query counts; subtraction gives the queries in between."""

    eval_counts: Tuple[int, ...]
    mark_counts: Tuple[int, ...]
    left_mark_counts: Tuple[int, ...]

    @property
    def evals(self) -> int:
        return sum(self.eval_counts)

    @property
    def marks(self) -> int:
        return sum(self.mark_counts)

    def total(self) -> int:
        return self.evals + self.marks

    def __sub__(self, other: "LedgerSnapshot") -> "LedgerSnapshot":
        return LedgerSnapshot(
            tuple(a - b for a, b in zip(self.eval_counts, other.eval_counts)),
            tuple(a - b for a, b in zip(self.mark_counts, other.mark_counts)),
            tuple(a - b for a, b in zip(self.left_mark_counts, other.left_mark_counts)),
        )

    def rows(self) -> List[Dict[str, int]]:
        return [
            {"agent": i, "eval": e, "mark": m}
            for i, (e, m) in enumerate(zip(self.eval_counts, self.mark_counts))
        ]


class QueryLedger:
    """Mutable counters owned by one oracle."""

    def __init__(self, n: int):
        self.eval_counts = [0] * n
        self.mark_counts = [0] * n
        self.left_mark_counts = [0] * n

    def record_eval(self, i: int) -> None:
        self.eval_counts[i] += 1

    def record_mark(self, i: int, left: bool = False) -> None:
        self.mark_counts[i] += 1
        if left:
            self.left_mark_counts[i] += 1

    def total(self) -> int:
        return sum(self.eval_counts) + sum(self.mark_counts)

    def snapshot(self) -> LedgerSnapshot:
        return LedgerSnapshot(
            tuple(self.eval_counts), tuple(self.mark_counts), tuple(self.left_mark_counts)
        )


class Oracle(QueryBase):
    """
    Counting query interface over one instance.

    Single-owner state: run one algorithm at a time against an oracle, and give
    each parallel experiment its own.
    """

    def __init__(self, instance: Instance):
        super().__init__(instance.n)
        self._instance = instance
        self.ledger = QueryLedger(instance.n)

    @property
    def n(self) -> int:
        return self.n_agents

    @property
    def entitlements(self) -> Tuple[Fraction, ...]:
        return self._instance.entitlements

    def is_hungry(self, i: int) -> bool:
        """Instance metadata used for precondition checks; not a query."""
        return self._instance.valuations[self._validate_agent(i)].hungry()

    def eval(self, i: int, x: Fraction, y: Fraction) -> Fraction:
        i = self._validate_agent(i)
        x, y = self._validate_interval(x, y)
        self.ledger.record_eval(i)
        return self._instance.valuations[i].value_of(x, y)

    def right_mark(self, i: int, x: Fraction, r: Fraction) -> MarkResult:
        i = self._validate_agent(i)
        x, r = self._validate_mark(x, r)
        self.ledger.record_mark(i)
        return self._instance.valuations[i].right_mark(x, r)

    def left_mark(self, i: int, x: Fraction, r: Fraction) -> MarkResult:
        i = self._validate_agent(i)
        x, r = self._validate_mark(x, r)
        self.ledger.record_mark(i, left=True)
        return self._instance.valuations[i].left_mark(x, r)

    def mark_interval(self, i: int, r: Fraction) -> Tuple[Fraction, Fraction]:
        """All r-marks of agent i form [left_mark(0, r), right_mark(0, r)]; 2 queries."""
        return self.left_mark(i, 0, r), self.right_mark(i, 0, r)


class MirrorSimulation(QueryBase):
    """
    Eval and right-mark answers for the mirrored instance, computed from eval and
    left-mark queries against an oracle for the original instance.

    Each simulated query costs at most two underlying queries; no right-mark is
    ever issued to the wrapped oracle.
    """

    def __init__(self, oracle: Oracle):
        super().__init__(oracle.n)
        self._oracle = oracle

    @property
    def n(self) -> int:
        return self.n_agents

    @property
    def entitlements(self) -> Tuple[Fraction, ...]:
        return self._oracle.entitlements

    @property
    def ledger(self) -> QueryLedger:
        return self._oracle.ledger

    def is_hungry(self, i: int) -> bool:
        return self._oracle.is_hungry(i)

    def eval(self, i: int, x: Fraction, y: Fraction) -> Fraction:
        x, y = self._validate_interval(x, y)
        return self._oracle.eval(i, ONE - y, ONE - x)

    def right_mark(self, i: int, x: Fraction, r: Fraction) -> MarkResult:
        i = self._validate_agent(i)
        x, r = self._validate_mark(x, r)
        k = self._oracle.eval(i, 0, ONE - x) - r
        if k < 0:
            return UNREACHABLE
        return ONE - self._oracle.left_mark(i, 0, k)


def mirror_instance(instance: Instance) -> Instance:
    """Reflect the cake about 1/2: the mirrored V([x, y]) equals V([1 - y, 1 - x])."""
    return Instance(
        tuple(v.mirrored() for v in instance.valuations),
        instance.entitlements,
        instance.names,
    )
