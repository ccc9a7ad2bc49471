"""
.. module:: asf.federation
    :platform: Unix
    :synopsis: Catalog projection and merging, federated registry views with enrichment.
"""

from .catalog import *
from .view import *
