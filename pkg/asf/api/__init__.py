"""
.. module:: asf.api
    :platform: Unix
    :synopsis: The operations shared by the REST service (:py:mod:`asf.api.service`) and the
        ``asf`` command line (:py:mod:`asf.api.cli`).
"""

from .config import *
from .context import *
