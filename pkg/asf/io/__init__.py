"""
.. module:: asf.io
    :platform: Unix
    :synopsis: This submodule contains tools for writing and reading to streams and files.
"""

from .handle import *
