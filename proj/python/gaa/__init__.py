"""Python bindings for the gaa quench library."""

from gaa._core import *  # noqa: F401,F403
from gaa._core import __version__  # noqa: F401
