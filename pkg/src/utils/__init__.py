"""Utility modules for exact field arithmetic, certified intervals and lattice enumeration."""

from .errors import NumberFieldError, MathematicalNegative
from .settings import Settings, settings
from .group_builder import GroupBuilder

__all__ = ["NumberFieldError", "MathematicalNegative", "Settings", "settings", "GroupBuilder"]
