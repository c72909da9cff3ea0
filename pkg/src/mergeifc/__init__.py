"""Merge three versions of an MJ program and look for interference between the two sides."""
from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def corpus_root() -> Path:
    """Directory of the bundled example scenarios."""
    return Path(str(resources.files(__name__) / "corpus"))
