"""Shared fixtures: the five reference weight sequences and hypothesis setup."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from sgtrees import WeightSequence

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def reference_sequences():
    """The five weight sequences every cross-cutting test exercises.

    all-ones (critical, infinite support), even arities only (span 2),
    zero-one (degenerate support {0,1}: every tree is a path), geometric
    with parameter 1/3, and a truncated cubic power law.
    """
    return {
        "ones": WeightSequence.geometric(Fraction(1)),
        "even": WeightSequence.explicit([1, 0, 1]),
        "path": WeightSequence.explicit([1, 1]),
        "geo13": WeightSequence.geometric(Fraction(1, 3)),
        "pow3t": WeightSequence.power(3, truncate=20),
    }


@pytest.fixture(scope="session")
def sequences():
    return reference_sequences()


@pytest.fixture(scope="session")
def w_ones():
    return WeightSequence.geometric(Fraction(1))


@pytest.fixture(scope="session")
def w_even():
    return WeightSequence.explicit([1, 0, 1])


@pytest.fixture(scope="session")
def w_path():
    return WeightSequence.explicit([1, 1])


@pytest.fixture(scope="session")
def w_pow3():
    return WeightSequence.power(3)
