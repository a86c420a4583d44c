from fractions import Fraction
from pathlib import Path

import pytest

from src.families import EXAMPLE_ROWS, gen_example
from src.model import Instance, Segment, Valuation
from src.oracle import Oracle

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def example1():
    return gen_example(1)


@pytest.fixture
def example2():
    return gen_example(2)


@pytest.fixture
def example3():
    return gen_example(3)


@pytest.fixture
def bob_chana():
    """The two hungry agents of example 1 with equal entitlements."""
    rows = EXAMPLE_ROWS[1]
    return Instance.with_equal_entitlements(
        [Valuation.from_weights(rows["Bob"]), Valuation.from_weights(rows["Chana"])],
        ("Bob", "Chana"),
    )


@pytest.fixture
def front_loaded_pair():
    """Agent 0 uniform; agent 1 puts 3/4 of its value on the left half."""
    skewed = Valuation((Segment(Fraction(1, 2), Fraction(3, 4)),
                        Segment(Fraction(1, 2), Fraction(1, 4))))
    return Instance.with_equal_entitlements([Valuation.uniform(), skewed])


@pytest.fixture
def uniform_oracle():
    def build(n):
        return Oracle(Instance.uniform(n))
    return build
