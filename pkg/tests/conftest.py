import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import math

import numpy as np
import pytest

from domain import QubitState

BELL_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
BELL_PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)


@pytest.fixture
def rng():
    """Seeded generator so property tests are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def bell_state():
    """(|00> + |11>)/sqrt2."""
    return QubitState(BELL_PHI_PLUS)


@pytest.fixture
def symmetric_bell_state():
    """(|01> + |10>)/sqrt2."""
    return QubitState(BELL_PSI_PLUS)
