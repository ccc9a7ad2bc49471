"""
.. module:: asf.security
    :platform: Unix
    :synopsis: Token authentication, role/LoA authorization and the audit trail.
"""

from .principal import *
from .policy import *
from .audit import *
from .auth import *
