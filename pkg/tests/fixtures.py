"""
extbranch Test Fixtures

Provides fixtures for:
- the 8-leaf illustrative history and its permutation/profile
- small caterpillar and cherry histories
- settings isolation between tests

Slow tests (large-n exact tables, long Monte Carlo runs) are skipped unless
RUN_SLOW_TESTS=true.
"""

import os
from pathlib import Path

import pytest
from dotenv import load_dotenv

from extbranch.config import reset_settings
from extbranch.histories import OrderedHistory, from_newick
from extbranch.permutations import Permutation

load_dotenv(Path(__file__).parent.parent / '.env')

# 8 leaves, ranks 1..7; in-order reading 2,6,4,5,3,1,7
EXAMPLE_NEWICK = '(((,)2,((,)4,(,(,)1)3)5)6,)7;'
EXAMPLE_PERMUTATION = (2, 6, 4, 5, 3, 1, 7)
EXAMPLE_PROFILE = (7, 4, 3, 2, 1)

CATERPILLAR4_NEWICK = '(((,)1,)2,)3;'


@pytest.fixture
def example_tree() -> OrderedHistory:
    """The 8-leaf example history."""
    return from_newick(EXAMPLE_NEWICK)


@pytest.fixture
def example_permutation() -> Permutation:
    return Permutation(EXAMPLE_PERMUTATION)


@pytest.fixture
def caterpillar4() -> OrderedHistory:
    """All-left caterpillar with 4 leaves."""
    return OrderedHistory(n=4, left=(0, 1, 2), right=(0, 0, 0))


@pytest.fixture
def cherry2() -> OrderedHistory:
    """The only history of size 2."""
    return OrderedHistory(n=2, left=(0,), right=(0,))


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Drop EXTBRANCH_* variables and rebuild settings around each test."""
    for key in list(os.environ):
        if key.startswith('EXTBRANCH_'):
            monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


# Mark slow tests (large exact tables, long simulations)
slow = pytest.mark.skipif(
    os.environ.get('RUN_SLOW_TESTS', '').lower() not in ('true', '1', 'yes'),
    reason="Slow test - requires RUN_SLOW_TESTS=true"
)
