"""Exact deformation theory of finite linear categories and their module categories."""

from .linalg import Field

__all__ = ["Field"]
__version__ = "0.1.0"
