"""
Shared pytest configuration and fixtures for the entire test suite.
"""

import os
import sys

import numpy as np
import pytest

# Add src directory to Python path so tests can import the package
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from crossbar_lfi.models.crossbar import CrossbarConfig, WeightGrid  # noqa: E402


@pytest.fixture
def linear_config():
    """Paper-linear 16x16 crossbar without wire parasitics."""
    return CrossbarConfig(rows=16, cols=16, wire_res_per_segment=0.0)


@pytest.fixture
def weak_config():
    """Weak-nonlinear return path on a 16x16 crossbar."""
    return CrossbarConfig(
        rows=16,
        cols=16,
        shunt_resistance_r_sh0=1470.0,
        shunt_nonlinearity_gamma=400.0,
        wire_res_per_segment=0.0,
    )


@pytest.fixture
def random_grid():
    """Seeded 16x16 grid in the 5-20 kohm range."""
    rng = np.random.default_rng(1234)
    return WeightGrid(rng.uniform(5e3, 20e3, size=(16, 16)))


@pytest.fixture
def table_currents():
    """Injection currents of the published fault table, in amperes."""
    return [10e-6, 15e-6, 20e-6, 30e-6, 40e-6]
