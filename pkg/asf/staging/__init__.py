"""
.. module:: asf.staging
    :platform: Unix
    :synopsis: Archive-based data staging with SHA-256 manifests.
"""

from .archive import *
