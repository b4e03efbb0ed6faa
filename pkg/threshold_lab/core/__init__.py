"""
Algorithms of the lab, one module per area, plus settings and errors.
"""

from .config import settings
