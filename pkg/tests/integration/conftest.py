"""
pytest configuration and fixtures specific to integration tests.
"""

import pytest

from crossbar_lfi.config import parse_config


@pytest.fixture
def small_experiment(tmp_path):
    """Default experiment shrunk to a 32x32 array writing into a temp directory."""
    return parse_config(
        f"""
output_dir: {tmp_path / "out"}
array:
  rows: 32
  cols: 32
"""
    )
