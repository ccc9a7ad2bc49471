"""
Catalogs: overview-level listings of analytics services.

A catalog entry carries the attributes a catalog provider supplies, i.e. every registry
attribute except the ones not applicable to catalogs (the heartbeat).
"""

import datetime
import logging

from collections import namedtuple

from ..core.entry import ENTRY_ATTRIBUTES
from ..tools import canonical_json

__all__ = ['CatalogEntry', 'CatalogError', 'CATALOG_ATTRIBUTES', 'project_to_catalog', 'merge_catalogs',
           'export_catalog', 'read_catalog']

logger = logging.getLogger(__name__)

CATALOG_ATTRIBUTES = tuple(_a for _a in ENTRY_ATTRIBUTES if _a != 'heartbeat')

_SEQUENCE_ATTRIBUTES = ('input_parameters', 'output_parameters', 'tags', 'categories')


class CatalogError(Exception):
    pass


class CatalogEntry(namedtuple('CatalogEntry', CATALOG_ATTRIBUTES)):
    """A service entry without its service-only attributes."""
    __slots__ = ()

    def __new__(cls, *args, **kwargs):
        if args:
            kwargs.update(zip(CATALOG_ATTRIBUTES, args))
        _unknown = set(kwargs) - set(CATALOG_ATTRIBUTES)
        if _unknown:
            raise TypeError("Attribute(s) not allowed in a catalog entry: {}".format(sorted(_unknown)))
        for _name in _SEQUENCE_ATTRIBUTES:
            if kwargs.get(_name) is not None:
                kwargs[_name] = tuple(kwargs[_name])
        return super(CatalogEntry, cls).__new__(cls, *[kwargs.get(_name) for _name in CATALOG_ATTRIBUTES])

    def _replace(self, **kwargs):
        _values = self._asdict()
        _values.update(kwargs)
        return self.__class__(**_values)

    def to_document(self):
        from ..representation.entry import entry_to_document
        return entry_to_document(self, attributes=CATALOG_ATTRIBUTES)


def project_to_catalog(entry):
    """
    Project a registry entry (or a catalog entry) into a catalog entry.

    :rtype: :py:class:`CatalogEntry`
    """
    return CatalogEntry(**dict((_a, getattr(entry, _a)) for _a in CATALOG_ATTRIBUTES))


def read_catalog(document):
    """catalog entries from a catalog document (JSON array)"""
    from ..representation import get_reader, DReprError
    try:
        return get_reader('catalog', 'json').make_object(document)
    except DReprError as _e:
        raise CatalogError("Malformed catalog document: {}".format(_e))


def _precedence(item):
    # later 'modified' wins, equal timestamps are ordered by content
    return (item.modified or datetime.datetime.min, canonical_json(item.to_document()))


def merge_catalogs(catalogs):
    """
    Union of catalog documents. Duplicate ids collapse to the version with the latest
    ``modified`` timestamp.

    :param catalogs: catalog documents (lists of entry documents)
    :return: merged catalog document ordered by (name, id)
    :raise CatalogError: for a malformed input document
    """
    from ..representation import get_writer
    _merged = dict()
    for _catalog in catalogs:
        for _item in read_catalog(_catalog):
            _current = _merged.get(_item.id)
            if _current is None or _precedence(_item) > _precedence(_current):
                _merged[_item.id] = _item
    _ordered = sorted(_merged.values(), key=lambda _e: (_e.name or '', _e.id))
    logger.debug("Merged %d catalog(s) into %d entries", len(catalogs), len(_ordered))
    return get_writer('catalog', 'json').make_document(_ordered)


def export_catalog(store, principal=None):
    """the catalog document of all (visible) entries of a registry store"""
    from ..representation import get_writer
    return get_writer('catalog', 'json').make_document(
        [project_to_catalog(_e) for _e in store.search(principal=principal)])
