"""Python access to the porous-medium transform library."""

from ._pmt import *  # noqa: F401,F403
from ._pmt import __doc__  # noqa: F401

__version__ = "0.1.0"
