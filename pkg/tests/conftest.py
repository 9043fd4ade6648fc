"""
extbranch Tests - Pytest Configuration

Adds the project root to the path and imports the shared fixtures.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from tests.fixtures import (
    caterpillar4,
    cherry2,
    example_permutation,
    example_tree,
    fresh_settings,
)

__all__ = [
    'caterpillar4',
    'cherry2',
    'example_permutation',
    'example_tree',
    'fresh_settings',
]
