"""Acoustic soft-tactile skin workbench.

Python bindings over the C++ core: synthetic acoustic-skin sensor,
force-calibration pipeline, deadband grip controller, and pick-and-drop
trial harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
