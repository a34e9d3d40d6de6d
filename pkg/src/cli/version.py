import subprocess
from pathlib import Path

from src import __version__

REPOSITORY_ROOT = Path(__file__).resolve().parents[2]


def version_string() -> str:
    """git describe of the checkout, or the package version outside a repository."""
    try:
        described = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=REPOSITORY_ROOT,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    return described.stdout.strip() or __version__
