"""
Shared fixtures for the spectral inclusion test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Make `src` importable when pytest runs from the repository root
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.bounds import RelBound, Subordinate


@pytest.fixture
def rng():
    return np.random.default_rng(20250101)


@pytest.fixture
def relbound():
    return RelBound(0.3, 0.2)


@pytest.fixture
def subordinate():
    return Subordinate(0.5, 0.5)
