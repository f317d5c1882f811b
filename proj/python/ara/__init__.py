"""Readability assessment for Philippine languages."""

from pathlib import Path

DEFAULT_FAMILY_TREE = str(Path(__file__).with_name("family_tree.json"))

from ._core import *  # noqa: E402,F401,F403
from ._core import AraError  # noqa: E402,F401

__version__ = "0.1.0"
