"""Python front end to the qcc core library."""

from ._qcc import *  # noqa: F401,F403
from ._qcc import __doc__  # noqa: F401

__version__ = "0.1.0"
