"""
pytest configuration and fixtures specific to unit tests.
"""

import numpy as np
import pytest

from crossbar_lfi.models.beam import GeometryConfig
from crossbar_lfi.models.crossbar import CrossbarConfig, WeightGrid


@pytest.fixture
def small_config():
    """2x2 crossbar with the return path as an explicit 1 kohm access resistor."""
    return CrossbarConfig(
        rows=2,
        cols=2,
        shunt_resistance_r_sh0=1000.0,
        selector_on_resistance=1000.0,
        wire_res_per_segment=0.0,
    )


@pytest.fixture
def small_grid():
    """Hand-checkable 2x2 grid."""
    return WeightGrid(np.array([[1000.0, 2000.0], [3000.0, 4000.0]]))


@pytest.fixture
def geometry_16():
    """16x16 array at 1 um pitch."""
    return GeometryConfig(cell_pitch=1.0, rows=16, cols=16)


@pytest.fixture
def geometry_large():
    """Array large enough to hold a 50 um spot."""
    return GeometryConfig(cell_pitch=1.0, rows=128, cols=128)
