"""
Thresholds of monotone families and the random maximal triangle-free construction, at desk scale.
"""

__version__ = "0.1.0"
