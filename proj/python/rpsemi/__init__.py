"""Poisson-clock projection semigroup laboratory: python surface of the C++ core."""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
