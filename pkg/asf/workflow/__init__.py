"""
.. module:: asf.workflow
    :platform: Unix
    :synopsis: YAML-defined job DAGs executed on local or simulated-remote executors.
"""

from .workflow import *
from .state import *
from .executors import *
from .runner import *
