import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _to_json(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"cannot serialize {type(value).__name__}")


class ReportWriter:
    """
    Collects the artifacts of one run and writes them together.

    Nothing touches the output directory before commit(), so a failing run
    leaves no partial files.

    Attributes:
        _directory (Path): Output directory
        _artifacts (Dict[str, str]): File name to file content
    """

    def __init__(self, directory: str, version: str, config: dict):
        self._directory = Path(directory)
        self._version = version
        self._config = config
        self._artifacts: Dict[str, str] = {}

    @property
    def artifacts(self) -> Dict[str, str]:
        return dict(self._artifacts)

    def add_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
        self._artifacts[name] = buffer.getvalue()

    def add_report(self, name: str, subcommand: str, results: dict) -> None:
        """Add a JSON report embedding the version and the resolved configuration."""
        report = {"subcommand": subcommand, "version": self._version, "config": self._config, "results": results}
        self._artifacts[name] = json.dumps(report, indent=2, sort_keys=True, default=_to_json) + "\n"

    def commit(self) -> None:
        self._directory.mkdir(parents=True, exist_ok=True)
        for name, content in self._artifacts.items():
            (self._directory / name).write_text(content)
            logger.info("wrote %s", self._directory / name)
