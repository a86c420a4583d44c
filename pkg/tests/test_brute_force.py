from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings

from src.brute_force import (
    chain_end,
    exists_by_enumeration,
    left_mark_misuse_demo,
    random_instance,
    random_valuation,
)
from src.decision import PROPORTIONAL, STRONG
from src.errors import EnumerationCapError
from src.families import gen_example
from src.model import Instance
from tests.strategies import instances

F = Fraction


@pytest.mark.parametrize("k, expected", [(1, False), (2, True), (3, False)])
def test_examples(k, expected):
    assert exists_by_enumeration(gen_example(k)) is expected


def test_identical_agents():
    instance = Instance.uniform(4)
    assert not exists_by_enumeration(instance, STRONG)
    assert exists_by_enumeration(instance, PROPORTIONAL)


def test_cap_is_enforced():
    with pytest.raises(EnumerationCapError):
        exists_by_enumeration(Instance.uniform(9))
    with pytest.raises(EnumerationCapError):
        exists_by_enumeration(Instance.uniform(4), cap=3)


class TestLeftMarkMisuse:
    def setup_method(self):
        self.report = left_mark_misuse_demo(gen_example(1))

    def test_left_mark_chain_ends_early(self):
        assert self.report.order == (2, 0, 1)
        assert self.report.left_end == F(9, 11)

    def test_no_allocation_exists(self):
        assert not self.report.strong_exists
        assert self.report.right_end is None
        assert self.report.demonstrated


@settings(max_examples=40, deadline=None)
@given(instances(max_agents=4, hungry=True))
def test_hungry_chains_do_not_depend_on_mark_side(instance):
    for order in permutations(range(instance.n)):
        assert chain_end(instance, order, instance.entitlements, left=True) == chain_end(
            instance, order, instance.entitlements)


@settings(max_examples=40, deadline=None)
@given(instances(max_agents=4))
def test_relabeling_agents_keeps_the_answer(instance):
    n = instance.n
    relabel = tuple(reversed(range(n)))
    relabeled = Instance(
        tuple(instance.valuations[i] for i in relabel),
        tuple(instance.entitlements[i] for i in relabel),
    )
    for mode in (STRONG, PROPORTIONAL):
        assert exists_by_enumeration(instance, mode) == exists_by_enumeration(relabeled, mode)


class TestRandomInstance:
    def test_same_seed_same_instance(self):
        first = random_instance(np.random.default_rng(42), 3)
        second = random_instance(np.random.default_rng(42), 3)
        assert first == second

    def test_without_zeros_every_agent_is_hungry(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            assert random_instance(rng, 3, zero_probability=0).all_hungry()

    def test_respects_segment_bound(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            instance = random_instance(rng, 2, max_segments=3, equal_entitlements=True)
            assert all(len(v.segments) <= 3 for v in instance.valuations)
            assert instance.equal_entitlements()

    def test_widths_stay_on_the_denominator_grid(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            valuation = random_valuation(rng, max_segments=6, max_denominator=12)
            assert all(12 % s.width.denominator == 0 for s in valuation.segments)
