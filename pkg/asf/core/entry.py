"""
Value types describing an analytics service in a registry or catalog.

All types are immutable named tuples: a :py:class:`ServiceEntry` handed out by a store can be
shared between threads and is never modified in place; use ``entry._replace(...)`` to derive
a changed copy.
"""

from collections import namedtuple

from ..tools import format_timestamp

__all__ = ['ServiceEntry', 'ParameterSpec', 'ResponseSpec', 'HeartbeatStatus', 'DataIntegration',
           'ENTRY_ATTRIBUTES', 'ACCESS_KINDS', 'ENTRY_CLASSES', 'HEARTBEAT_STATES',
           'INSTANTIATED_SERVICE', 'LIBRARY']

ACCESS_KINDS = ('stream', 'database', 'value', 'event')

INSTANTIATED_SERVICE = 'instantiated-service'
LIBRARY = 'library'
ENTRY_CLASSES = (INSTANTIATED_SERVICE, LIBRARY)

HEARTBEAT_STATES = ('alive', 'dead', 'unknown')

ENTRY_ATTRIBUTES = (
    'id',
    'name',
    'title',
    'public',
    'description',
    'endpoint',
    'input_parameters',
    'output_parameters',
    'version',
    'license',
    'protocol',
    'microservice',
    'modified',
    'owner',
    'author',
    'tags',
    'categories',
    'created',
    'heartbeat',
    'documentation',
    'source',
    'specification_schema',
    'additional_metadata',
    'sla',
    'caching_interval',
    'data_integration',
    'authors',
    'entry_class',
)

_SEQUENCE_ATTRIBUTES = ('input_parameters', 'output_parameters', 'tags', 'categories')


class ParameterSpec(namedtuple('ParameterSpec', ('name', 'function', 'type', 'value', 'access'))):
    """One input parameter of a service function."""
    __slots__ = ()

    def __new__(cls, name, function, type, value=None, access='value'):
        return super(ParameterSpec, cls).__new__(cls, name, function, type, value, access)


class ResponseSpec(namedtuple('ResponseSpec', ('function', 'name', 'type', 'value', 'access', 'timestamp'))):
    """One response cast by a service function."""
    __slots__ = ()

    def __new__(cls, function, name, type, value=None, access='value', timestamp=None):
        return super(ResponseSpec, cls).__new__(cls, function, name, type, value, access, timestamp)


class HeartbeatStatus(namedtuple('HeartbeatStatus', ('state', 'checked_at'))):
    """State and timestamp of the last liveness check."""
    __slots__ = ()

    @property
    def alive(self):
        return self.state == 'alive'

    def to_document(self):
        return dict(state=self.state, checked_at=format_timestamp(self.checked_at))


class DataIntegration(namedtuple('DataIntegration', ('upload_endpoint', 'download_endpoint', 'protocol'))):
    """Upload/download endpoints for data that cannot be passed as a parameter."""
    __slots__ = ()

    def __new__(cls, upload_endpoint=None, download_endpoint=None, protocol=None):
        return super(DataIntegration, cls).__new__(cls, upload_endpoint, download_endpoint, protocol)


class ServiceEntry(namedtuple('ServiceEntry', ENTRY_ATTRIBUTES)):
    """
    A registry record of an analytics service.

    Every attribute defaults to ``None`` (absent). Sequence attributes are stored as tuples.
    """
    __slots__ = ()

    def __new__(cls, *args, **kwargs):
        if args:
            # positional construction (copy, pickle)
            kwargs.update(zip(ENTRY_ATTRIBUTES, args))
        _unknown = set(kwargs) - set(ENTRY_ATTRIBUTES)
        if _unknown:
            raise TypeError("Unknown service entry attribute(s): {}".format(sorted(_unknown)))
        for _name in _SEQUENCE_ATTRIBUTES:
            if kwargs.get(_name) is not None:
                kwargs[_name] = tuple(kwargs[_name])
        _values = [kwargs.get(_name) for _name in ENTRY_ATTRIBUTES]
        return super(ServiceEntry, cls).__new__(cls, *_values)

    def _replace(self, **kwargs):
        _values = self._asdict()
        _values.update(kwargs)
        return self.__class__(**_values)

    @property
    def is_library(self):
        return self.entry_class == LIBRARY

    def to_document(self):
        """key-value document of this entry (snake_case keys, absent attributes omitted)"""
        from ..representation import get_writer
        return get_writer('entry', 'json').make_document(self)

    @classmethod
    def from_document(cls, document):
        from ..representation import get_reader
        return get_reader('entry', 'json').make_object(document)
