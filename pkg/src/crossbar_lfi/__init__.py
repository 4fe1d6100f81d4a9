"""
Crossbar LFI

A circuit-level simulator of laser fault injection on memristive crossbar
arrays, with a differential fault analysis pipeline for extracting stored
weights and a TEAM-model pipeline for corrupting them.
"""

from typing import List

__version__ = "0.1.0"
__author__ = "Crossbar LFI Developers"
__email__ = "dev@example.com"
__description__ = (
    "Laser fault injection on memristive crossbars: weight extraction by "
    "differential fault analysis and weight corruption through TEAM dynamics"
)

# Package information
__title__ = "crossbar-lfi"
__license__ = "MIT"
__copyright__ = "2024, Crossbar LFI Developers"

__all__: List[str] = [
    "__version__",
    "__author__",
    "__email__",
    "__description__",
    "__title__",
    "__license__",
    "__copyright__",
]
