"""Dual-hop satellite-UAV-ground link statistics (C++ core bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
