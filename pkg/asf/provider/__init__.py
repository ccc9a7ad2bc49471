"""
.. module:: asf.provider
    :platform: Unix
    :synopsis: Vendor-neutral provider facade: uniform invocation records, cooperation,
               competition and benchmarking, exemplified by translation providers.
"""

from .records import *
from .bindings import *
from .combinators import *
from .benchmark import *
