"""
This package contains the commands exposed on the command line.
"""

from .api import api_router
