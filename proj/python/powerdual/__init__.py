"""Python bindings for the powerdual C++ library."""

from ._core import *  # noqa: F401,F403
from ._core import Error, __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
