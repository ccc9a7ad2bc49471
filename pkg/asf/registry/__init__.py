"""
.. module:: asf.registry
    :platform: Unix
    :synopsis: Analytics service registry: storage, validation on registration, search,
               heartbeat and cached invocation.
"""

from .store import *
from .heartbeat import *
