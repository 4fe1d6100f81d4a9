"""
Artifact output for subcommands.

Tables are pandas DataFrames written as CSV; reports are plain text. Nothing
touches the output directory until flush(), and each file is written to a
temporary sibling first and then moved into place.
"""

import logging
import os
from pathlib import Path
from typing import Dict, List, Union

import pandas as pd

logger = logging.getLogger(__name__)

# Fixed float format keeps CSV bytes identical across runs and platforms.
CSV_FLOAT_FORMAT = "%.12g"


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    """Render a DataFrame to CSV text with the project's fixed formatting."""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write text to path by way of a temporary sibling and os.replace."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(f".{target.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    os.replace(tmp, target)
    return target


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    """Write a DataFrame atomically as CSV."""
    return write_text_atomic(path, frame_to_csv_text(frame))


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV artifact."""
    return pd.read_csv(path)


class ArtifactWriter:
    """
    Collects the tables and reports of one subcommand and writes them together.

    Args:
        output_dir: Directory that receives every artifact on flush()
    """

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self._pending: Dict[str, str] = {}

    def add_table(self, name: str, frame: pd.DataFrame) -> None:
        self._pending[name] = frame_to_csv_text(frame)

    def add_report(self, name: str, lines: Union[str, List[str]]) -> None:
        text = lines if isinstance(lines, str) else "\n".join(lines)
        if not text.endswith("\n"):
            text += "\n"
        self._pending[name] = text

    @property
    def pending(self) -> List[str]:
        return sorted(self._pending)

    def flush(self) -> List[Path]:
        """Write every pending artifact and return the paths written."""
        written = []
        for name in sorted(self._pending):
            written.append(write_text_atomic(self.output_dir / name, self._pending[name]))
            logger.debug(f"Wrote artifact {name}")
        logger.info(f"Wrote {len(written)} artifact(s) to {self.output_dir}")
        self._pending.clear()
        return written
