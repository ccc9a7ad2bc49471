"""
.. module:: asf.experiment
    :platform: Unix
    :synopsis: Parameter study experiments: expansion of a configuration into one generated,
               runnable script per permutation.
"""

from .config import *
from .generator import *
