"""Shared fixtures."""

import random

import pytest

from index_coding_bounds.catalog import get_problem
from index_coding_bounds.problem import parse_problem, uniform_capacities
from index_coding_bounds.schemas import Problem


@pytest.fixture
def unit_caps4():
    return uniform_capacities(4)


@pytest.fixture
def problem_1():
    """No side information anywhere."""
    return get_problem(1)


@pytest.fixture
def problem_140():
    """Sum capacity 21, closed by the closure bound."""
    return get_problem(140)


@pytest.fixture
def problem_155():
    return get_problem(155)


@pytest.fixture
def problem_218():
    """Every receiver knows every other message."""
    return get_problem(218)


@pytest.fixture
def cycle3():
    return parse_problem("(1|2),(2|3),(3|1)")


@pytest.fixture
def random_problem():
    """Seeded factory: every other message is side information with probability 1/2."""

    def make(seed: int, n: int) -> Problem:
        rng = random.Random(seed)
        sets = [[j for j in range(1, n + 1) if j != i and rng.random() < 0.5] for i in range(1, n + 1)]
        return Problem.from_sets(sets)

    return make
