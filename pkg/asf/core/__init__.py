"""
.. module:: asf.core
    :platform: Unix
    :synopsis: Service entry value types, provider role profiles, validation and the response cache.
"""

from .entry import *
from .profiles import *
from .cache import *
