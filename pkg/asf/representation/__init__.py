"""
.. module:: asf.representation
    :platform: Unix
    :synopsis: Reader/writer registry for the JSON and YAML documents of asf objects.

Every object type (``entry``, ``registry``, ``catalog``, ``store``, ``workflow``,
``experiment``, ``tokens``, ``federation``) registers one reader and one writer class per
file format on import. :py:func:`get_reader` and :py:func:`get_writer` look them up;
:py:func:`read_file` and :py:func:`write_file` also pick the format from the file extension.
"""

import os

from ..io import InputFileHandle, OutputFileHandle

# populated by the imports below
_AVAILABLE_REPRESENTATIONS = dict()

_FILE_FORMAT_ALIAS_RESOLVDICT = dict(yml='yaml')


from ._base import DReprError
from .entry import *
from .workflow import *
from .experiment import *
from .tokens import *
from .federation import *


def _resolve(mapping, key, what, context):
    try:
        return mapping[key]
    except KeyError:
        raise DReprError("No representers {} '{}'{}! Available: {}".format(
            what, key, context, sorted(mapping.keys())))


def _get_representer(object_type_name, role, file_format):
    _roles = _resolve(_AVAILABLE_REPRESENTATIONS, object_type_name, "found for object type", "")
    _formats = _resolve(_roles, role, "with role", " for object type '{}'".format(object_type_name))
    return _resolve(_formats, _FILE_FORMAT_ALIAS_RESOLVDICT.get(file_format, file_format),
                    "for file format", " ({} of '{}')".format(role, object_type_name))


def get_reader(object_type_name, file_format):
    return _get_representer(object_type_name, 'reader', file_format)


def get_writer(object_type_name, file_format):
    return _get_representer(object_type_name, 'writer', file_format)


def format_from_filename(filename, default=None):
    """``'json'`` or ``'yaml'`` from the file extension; `default` for anything else"""
    _ext = os.path.splitext(filename)[1].lstrip('.').lower()
    _ext = _FILE_FORMAT_ALIAS_RESOLVDICT.get(_ext, _ext)
    return _ext if _ext in ('json', 'yaml') else default


def read_file(object_type_name, filename, file_format=None):
    """Read an object from a file. The format defaults to the one of the file extension."""
    _format = file_format or format_from_filename(filename)
    if _format is None:
        raise DReprError("Cannot tell the format of '{}' from its extension!".format(filename))
    return get_reader(object_type_name, _format)(InputFileHandle(filename)).read()


def write_file(asf_object, object_type_name, filename, file_format=None):
    """Replace `filename` by the document of `asf_object`."""
    _format = file_format or format_from_filename(filename)
    if _format is None:
        raise DReprError("Cannot tell the format of '{}' from its extension!".format(filename))
    get_writer(object_type_name, _format)(asf_object, OutputFileHandle(filename)).write()
