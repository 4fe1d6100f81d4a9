"""
Utility Functions

Logging, error handling, validation and artifact output shared by the engine
modules and the command line.
"""

from typing import List

__all__: List[str] = [
    "artifacts",
    "error_handling",
    "logging",
    "validation",
]
