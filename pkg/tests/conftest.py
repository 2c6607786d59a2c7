"""
Shared fixtures for the isotoda test suite.
"""

import numpy as np
import pytest

from src.isotoda.config import seed_from_env


@pytest.fixture
def seed():
    """Seed for randomized checks, taken from ISOTODA_SEED."""
    return seed_from_env()


@pytest.fixture
def rng(seed):
    """A numpy generator seeded from ISOTODA_SEED."""
    return np.random.default_rng(seed)
