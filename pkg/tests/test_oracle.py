from fractions import Fraction

import numpy as np
import pytest

from src.brute_force import random_instance
from src.decision import decide_general
from src.errors import DomainError
from src.families import gen_example
from src.model import UNREACHABLE, Instance, Segment, Valuation
from src.oracle import MirrorSimulation, Oracle, mirror_instance

F = Fraction


class TestQueries:
    def setup_method(self):
        self.uniform = Oracle(Instance.uniform(2))

    def test_eval(self, example1):
        assert self.uniform.eval(0, 0, F(1, 3)) == F(1, 3)
        assert Oracle(example1).eval(2, 0, F(2, 11)) == F(1, 3)
        assert self.uniform.eval(1, F(2, 5), F(2, 5)) == 0

    def test_right_mark(self, example1):
        assert self.uniform.right_mark(0, F(1, 4), F(1, 2)) == F(3, 4)
        assert Oracle(example1).right_mark(0, 0, F(1, 3)) == F(4, 11)
        assert self.uniform.right_mark(0, F(1, 2), F(3, 4)) is UNREACHABLE

    def test_left_mark(self, example1):
        assert self.uniform.left_mark(0, 0, F(1, 2)) == F(1, 2)
        assert Oracle(example1).left_mark(0, 0, F(1, 3)) == F(1, 11)

    def test_each_query_costs_one(self):
        self.uniform.eval(0, 0, 1)
        self.uniform.right_mark(1, 0, F(1, 2))
        self.uniform.left_mark(1, 0, F(1, 2))
        self.uniform.right_mark(0, F(1, 2), F(3, 4))
        ledger = self.uniform.ledger
        assert ledger.eval_counts == [1, 0]
        assert ledger.mark_counts == [1, 2]
        assert ledger.left_mark_counts == [0, 1]
        assert ledger.total() == 4

    @pytest.mark.parametrize("call", [
        lambda o: o.eval(2, 0, 1),
        lambda o: o.eval(0, F(3, 4), F(1, 4)),
        lambda o: o.eval(0, F(-1, 4), F(1, 4)),
        lambda o: o.right_mark(0, 0, F(3, 2)),
        lambda o: o.left_mark(0, F(5, 4), F(1, 2)),
        lambda o: o.right_mark(-1, 0, F(1, 2)),
        lambda o: o.right_mark(True, 0, F(1, 2)),
        lambda o: o.eval(0, 0.25, 1),
    ])
    def test_invalid_queries_are_not_counted(self, call):
        with pytest.raises(DomainError):
            call(self.uniform)
        assert self.uniform.ledger.total() == 0


class TestMarkInterval:
    def test_uniform(self):
        assert Oracle(Instance.uniform(1)).mark_interval(0, F(1, 2)) == (F(1, 2), F(1, 2))

    def test_alice(self, example1):
        oracle = Oracle(example1)
        assert oracle.mark_interval(0, F(1, 3)) == (F(1, 11), F(4, 11))
        assert oracle.ledger.total() == 2

    def test_example3_alice(self, example3):
        assert Oracle(example3).mark_interval(0, F(2, 3)) == (F(3, 5), F(3, 5))

    def test_value_above_one_is_an_error(self):
        with pytest.raises(DomainError):
            Oracle(Instance.uniform(1)).mark_interval(0, F(4, 3))


class TestLedgerSnapshot:
    def test_subtraction(self):
        oracle = Oracle(Instance.uniform(2))
        oracle.eval(0, 0, 1)
        before = oracle.ledger.snapshot()
        oracle.right_mark(1, 0, F(1, 2))
        oracle.eval(1, 0, 1)
        delta = oracle.ledger.snapshot() - before
        assert delta.eval_counts == (0, 1)
        assert delta.mark_counts == (0, 1)
        assert delta.total() == 2
        assert delta.rows() == [{"agent": 0, "eval": 0, "mark": 0},
                                {"agent": 1, "eval": 1, "mark": 1}]


class TestMirror:
    def test_uniform_is_its_own_mirror(self):
        assert mirror_instance(Instance.uniform(3)) == Instance.uniform(3)

    def test_segments_are_reversed(self):
        v = Valuation((Segment(F(1, 2), F(1, 3)), Segment(F(1, 2), F(2, 3))))
        mirrored = mirror_instance(Instance((v,), (F(1),)))
        assert mirrored.valuations[0].segments == (Segment(F(1, 2), F(2, 3)),
                                                   Segment(F(1, 2), F(1, 3)))

    def test_involution(self, example1):
        assert mirror_instance(mirror_instance(example1)) == example1

    def test_mirrored_values(self, example1):
        mirrored = mirror_instance(example1)
        for v, w in zip(example1.valuations, mirrored.valuations):
            assert w.value_of(F(1, 5), F(3, 7)) == v.value_of(F(4, 7), F(4, 5))

    def test_left_mark_identity_over_random_triples(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 500:
            instance = random_instance(rng, int(rng.integers(1, 4)))
            original, mirrored = Oracle(instance), Oracle(mirror_instance(instance))
            for _ in range(10):
                i = int(rng.integers(0, instance.n))
                k = F(int(rng.integers(0, 25)), 24)
                assert original.left_mark(i, 0, k) == 1 - mirrored.right_mark(i, 0, 1 - k)
                checked += 1


class TestMirrorSimulation:
    def test_matches_direct_queries_on_the_mirror(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            instance = random_instance(rng, 2)
            simulated = MirrorSimulation(Oracle(instance))
            direct = Oracle(mirror_instance(instance))
            for _ in range(5):
                i = int(rng.integers(0, 2))
                x = F(int(rng.integers(0, 13)), 12)
                r = F(int(rng.integers(0, 13)), 12)
                assert simulated.right_mark(i, x, r) == direct.right_mark(i, x, r)
                assert simulated.eval(i, 0, x) == direct.eval(i, 0, x)

    def test_never_issues_right_marks(self, example2):
        oracle = Oracle(example2)
        MirrorSimulation(oracle).right_mark(1, F(1, 3), F(1, 3))
        assert oracle.ledger.mark_counts == oracle.ledger.left_mark_counts
        assert oracle.ledger.total() == 2

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_decision_through_simulation(self, k):
        instance = gen_example(k)
        oracle = Oracle(instance)
        assert decide_general(MirrorSimulation(oracle)).exists == decide_general(
            Oracle(instance)).exists
        assert oracle.ledger.mark_counts == oracle.ledger.left_mark_counts
