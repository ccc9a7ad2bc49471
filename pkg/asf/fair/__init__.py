"""
.. module:: asf.fair
    :platform: Unix
    :synopsis: FAIR (plus deployability and operability) compliance audit of service entries.
"""

from .audit import *
