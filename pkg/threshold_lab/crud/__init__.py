"""
Persistence of run artifacts.
"""

from .base import ArtifactStore
