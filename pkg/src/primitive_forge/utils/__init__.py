"""
Utility modules for Primitive Forge.
"""

from .logging import setup_logging
from .summation import CompensatedSum, prefix_sums

__all__ = ["CompensatedSum", "prefix_sums", "setup_logging"]
