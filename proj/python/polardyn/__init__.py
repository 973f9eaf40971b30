"""Bloch-vector dynamics, rotation-scaling decomposition and entropy of open quantum systems."""

from ._core import *  # noqa: F401,F403
from ._core import NormalityViolation  # noqa: F401

__version__ = "0.1.0"
