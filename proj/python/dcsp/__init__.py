"""Decentralized subspace pursuit for joint support recovery.

Index sets are sorted lists of 1-based ints; matrices and vectors are numpy
arrays of float64.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
