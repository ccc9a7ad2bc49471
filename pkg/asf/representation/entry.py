"""
JSON representations of service entries, registry dumps and catalogs.

An entry document uses the snake_case attribute names of
:py:class:`~asf.core.entry.ServiceEntry` as keys, omits absent attributes and renders
timestamps as ``YYYY-MM-DDTHH:MM:SSZ``. A registry dump and a catalog are JSON arrays of such
documents.
"""

import abc
import six

from ..core.entry import (ServiceEntry, ParameterSpec, ResponseSpec, HeartbeatStatus, DataIntegration,
                          ENTRY_ATTRIBUTES)
from ..tools import format_timestamp, parse_timestamp
from . import _AVAILABLE_REPRESENTATIONS
from ._base import GenericDReprBase, DReprError
from ._json_base import JsonWriterMixin, JsonReaderMixin

__all__ = ['EntryJsonWriter', 'EntryJsonReader',
           'RegistryDumpJsonWriter', 'RegistryDumpJsonReader',
           'CatalogJsonWriter', 'CatalogJsonReader',
           'RegistryStoreJsonWriter', 'RegistryStoreJsonReader']


def _parameter_to_document(spec):
    _doc = spec._asdict()
    if isinstance(spec, ResponseSpec):
        _doc['timestamp'] = format_timestamp(spec.timestamp)
    return dict((_k, _v) for _k, _v in six.iteritems(_doc) if _v is not None)


def _parameter_from_document(document, spec_type):
    if not isinstance(document, dict):
        raise DReprError("Parameter description must be a mapping, got {!r}!".format(document))
    _doc = dict(document)
    try:
        if spec_type is ResponseSpec and 'timestamp' in _doc:
            _doc['timestamp'] = parse_timestamp(_doc['timestamp'])
        return spec_type(**_doc)
    except (TypeError, ValueError) as _e:
        raise DReprError("Invalid {} document {!r}: {}".format(spec_type.__name__, document, _e))


_ATTRIBUTE_WRITERS = dict(
    modified=format_timestamp,
    created=format_timestamp,
    input_parameters=lambda v: [_parameter_to_document(_p) for _p in v],
    output_parameters=lambda v: [_parameter_to_document(_p) for _p in v],
    tags=list,
    categories=list,
    heartbeat=lambda v: v.to_document(),
    data_integration=lambda v: dict((_k, _v) for _k, _v in six.iteritems(v._asdict()) if _v is not None),
)


def _read_heartbeat(document):
    if not isinstance(document, dict) or set(document) - {'state', 'checked_at'}:
        raise DReprError("Invalid heartbeat document {!r}!".format(document))
    return HeartbeatStatus(state=document.get('state'), checked_at=parse_timestamp(document.get('checked_at')))


def _read_data_integration(document):
    if not isinstance(document, dict):
        raise DReprError("Invalid data integration document {!r}!".format(document))
    try:
        return DataIntegration(**document)
    except TypeError as _e:
        raise DReprError("Invalid data integration document {!r}: {}".format(document, _e))


def _read_list(value):
    if not isinstance(value, list):
        raise DReprError("Expected a list, got {!r}!".format(value))
    return value


_ATTRIBUTE_READERS = dict(
    modified=parse_timestamp,
    created=parse_timestamp,
    input_parameters=lambda v: [_parameter_from_document(_p, ParameterSpec) for _p in _read_list(v)],
    output_parameters=lambda v: [_parameter_from_document(_p, ResponseSpec) for _p in _read_list(v)],
    tags=_read_list,
    categories=_read_list,
    heartbeat=_read_heartbeat,
    data_integration=_read_data_integration,
)


def entry_to_document(entry, attributes=ENTRY_ATTRIBUTES):
    _doc = dict()
    for _attribute in attributes:
        _value = getattr(entry, _attribute)
        if _value is None:
            continue
        _writer = _ATTRIBUTE_WRITERS.get(_attribute)
        _doc[_attribute] = _writer(_value) if _writer is not None else _value
    return _doc


def document_to_kwargs(document):
    _kwargs = dict()
    for _attribute, _value in six.iteritems(document):
        if _value is None:
            continue
        _reader = _ATTRIBUTE_READERS.get(_attribute)
        try:
            _kwargs[_attribute] = _reader(_value) if _reader is not None else _value
        except ValueError as _e:
            raise DReprError("Invalid value for '{}': {}".format(_attribute, _e))
    return _kwargs


@six.add_metaclass(abc.ABCMeta)
class EntryDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'entry'
    KNOWN_KEYWORDS = ENTRY_ATTRIBUTES


class EntryJsonWriter(JsonWriterMixin, EntryDReprBase):

    def __init__(self, entry, output_io_handle):
        super(EntryJsonWriter, self).__init__(asf_object=entry, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, entry):
        """Create a dictionary representing a service entry.

        :param entry: The entry which will be converted.
        :type entry: asf.core.ServiceEntry
        """
        return entry_to_document(entry)


class EntryJsonReader(JsonReaderMixin, EntryDReprBase):

    def __init__(self, input_io_handle):
        super(EntryJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def _convert_document_to_object(cls, document):
        return ServiceEntry(**document_to_kwargs(document))


@six.add_metaclass(abc.ABCMeta)
class RegistryDumpDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'registry'


class RegistryDumpJsonWriter(JsonWriterMixin, RegistryDumpDReprBase):
    """writes a list of entries sorted by (name, id)"""

    def __init__(self, entries, output_io_handle):
        super(RegistryDumpJsonWriter, self).__init__(asf_object=entries, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, entries):
        _ordered = sorted(entries, key=lambda _e: (_e.name or '', _e.id or ''))
        return [EntryJsonWriter.make_document(_e) for _e in _ordered]


class RegistryDumpJsonReader(JsonReaderMixin, RegistryDumpDReprBase):

    def __init__(self, input_io_handle):
        super(RegistryDumpJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def make_object(cls, document):
        if not isinstance(document, list):
            raise DReprError("A registry dump must be a JSON array, got {}!".format(type(document).__name__))
        return [EntryJsonReader.make_object(_d) for _d in document]


@six.add_metaclass(abc.ABCMeta)
class CatalogDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'catalog'


class CatalogJsonWriter(JsonWriterMixin, CatalogDReprBase):

    def __init__(self, catalog, output_io_handle):
        super(CatalogJsonWriter, self).__init__(asf_object=catalog, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, catalog):
        from ..federation.catalog import CATALOG_ATTRIBUTES
        return [entry_to_document(_e, attributes=CATALOG_ATTRIBUTES) for _e in catalog]


class CatalogJsonReader(JsonReaderMixin, CatalogDReprBase):

    def __init__(self, input_io_handle):
        super(CatalogJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def make_object(cls, document):
        from ..federation.catalog import CatalogEntry, CATALOG_ATTRIBUTES
        if not isinstance(document, list):
            raise DReprError("A catalog document must be a JSON array, got {}!".format(type(document).__name__))
        _catalog = []
        for _item in document:
            if not isinstance(_item, dict):
                raise DReprError("Catalog items must be mappings, got {!r}!".format(_item))
            _unknown = sorted(set(_item) - set(CATALOG_ATTRIBUTES))
            if _unknown:
                raise DReprError("Catalog item carries attribute(s) not allowed in a catalog: {}".format(_unknown))
            if 'id' not in _item:
                raise DReprError("Catalog item without id: {!r}".format(_item))
            _catalog.append(CatalogEntry(**document_to_kwargs(_item)))
        return _catalog


@six.add_metaclass(abc.ABCMeta)
class RegistryStoreDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'store'
    KNOWN_KEYWORDS = ('base_url', 'visibility', 'entries', 'retired_ids')
    REQUIRED_KEYWORDS = ('entries',)


class RegistryStoreJsonWriter(JsonWriterMixin, RegistryStoreDReprBase):
    """writes the persistent store file of a registry"""

    def __init__(self, store, output_io_handle):
        super(RegistryStoreJsonWriter, self).__init__(asf_object=store, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, store):
        return dict(base_url=store.base_url,
                    visibility=store.visibility,
                    entries=RegistryDumpJsonWriter.make_document(store.entries()),
                    retired_ids=sorted(store.retired_ids))


class RegistryStoreJsonReader(JsonReaderMixin, RegistryStoreDReprBase):

    def __init__(self, input_io_handle):
        super(RegistryStoreJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def _convert_document_to_object(cls, document):
        from ..registry.store import RegistryStore
        _kwargs = dict((_k, document[_k]) for _k in ('base_url', 'visibility') if _k in document)
        return RegistryStore(entries=RegistryDumpJsonReader.make_object(document['entries']),
                             retired_ids=document.get('retired_ids', ()), **_kwargs)


# register the above classes in the module-level dictionary
EntryJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
EntryJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
RegistryDumpJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
RegistryDumpJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
CatalogJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
CatalogJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
RegistryStoreJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
RegistryStoreJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
