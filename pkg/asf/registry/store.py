"""
The analytics service registry store.

A :py:class:`RegistryStore` holds :py:class:`~asf.core.entry.ServiceEntry` values keyed by id.
Reads return immutable snapshots; mutations are serialized by a lock and, if the store was
opened from a file, written back atomically before they return.
"""

import datetime
import logging
import os
import threading
import time

from collections import namedtuple

import six

from ..config import kc
from ..core import (ResponseCache, HeartbeatStatus, LIBRARY, INSTANTIATED_SERVICE,
                    validate_entry, role_for_entry_class, is_present)
from ..tools import utc_now, new_uuid, canonical_json, is_url

__all__ = ['RegistryStore', 'SearchQuery',
           'RegistryError', 'EntryValidationError', 'RegistryConflictError', 'RegistryNotFoundError',
           'NotApplicableError', 'visible_to', 'VISIBILITIES', 'CODE_BASE', 'SERVICE_ENDPOINT']

logger = logging.getLogger(__name__)

VISIBILITIES = ('public', 'private')

CODE_BASE = 'code-base'
SERVICE_ENDPOINT = 'service-endpoint'


class RegistryError(Exception):
    pass


class EntryValidationError(RegistryError):
    def __init__(self, report):
        self.report = report
        super(EntryValidationError, self).__init__(
            "Entry failed validation: {}".format('; '.join(report.violations)))


class RegistryConflictError(RegistryError):
    pass


class RegistryNotFoundError(RegistryError):
    pass


class NotApplicableError(RegistryError):
    pass


class SearchQuery(namedtuple('SearchQuery', ('keywords', 'tags', 'categories'))):
    """Facets of a registry search. Empty facets do not restrict the result."""
    __slots__ = ()

    def __new__(cls, keywords=(), tags=(), categories=()):
        return super(SearchQuery, cls).__new__(cls, tuple(keywords or ()), tuple(tags or ()),
                                               tuple(categories or ()))

    @classmethod
    def from_document(cls, document):
        if document is None:
            return cls()
        if isinstance(document, SearchQuery):
            return document
        _unknown = set(document) - set(cls._fields)
        if _unknown:
            raise RegistryError("Unknown search facet(s): {}".format(sorted(_unknown)))
        _facets = dict()
        for _key in cls._fields:
            _value = document.get(_key) or ()
            _facets[_key] = [_value] if isinstance(_value, six.string_types) else list(_value)
        return cls(**_facets)

    def to_document(self):
        return dict(keywords=list(self.keywords), tags=list(self.tags), categories=list(self.categories))

    def matches(self, entry):
        for _keyword in self.keywords:
            _needle = _keyword.lower()
            if not any(_needle in (_text or '').lower() for _text in (entry.name, entry.title, entry.description)):
                return False
        _tags = entry.tags or ()
        if any(_tag not in _tags for _tag in self.tags):
            return False
        _categories = entry.categories or ()
        if any(_category not in _categories for _category in self.categories):
            return False
        return True


def _class_invariant_problems(entry):
    if entry.entry_class == INSTANTIATED_SERVICE and not is_present(entry.endpoint):
        return ["endpoint required for an instantiated service"]
    if entry.entry_class == LIBRARY and is_present(entry.endpoint):
        return ["endpoint must be absent for a library"]
    return []


def visible_to(entry, principal):
    if principal is None or not principal.is_guest_only:
        return True
    return entry.public is True


class RegistryStore(object):
    """
    Id-keyed collection of service entries.

    :param visibility: ``public`` or ``private``
    :param base_url: URL prefix under which the ids of this registry resolve
    :param entries: initial entries (already registered elsewhere, taken as they are)
    :param retired_ids: ids of removed entries, never handed out again
    :param clock: callable returning the current UTC time as a naive ``datetime``
    :param cache_capacity: capacity of the response cache of :py:meth:`cached_invoke`
    :param filename: store file written after every mutation
    """

    def __init__(self, visibility='public', base_url=None, entries=(), retired_ids=(), clock=utc_now,
                 cache_capacity=None, filename=None):
        if visibility not in VISIBILITIES:
            raise RegistryError("Unknown registry visibility '{}'! Expected one of {}.".format(visibility, VISIBILITIES))
        self._visibility = visibility
        self._base_url = base_url if base_url is not None else kc('service', 'base_url')
        self._clock = clock
        self._lock = threading.RLock()
        self._entries = dict()
        for _entry in entries:
            if _entry.id in self._entries:
                raise RegistryConflictError("Duplicate entry id '{}' in store".format(_entry.id))
            self._entries[_entry.id] = _entry
        self._retired_ids = set(retired_ids)
        _capacity = cache_capacity if cache_capacity is not None else kc('registry', 'cache_capacity')
        self._cache = ResponseCache(capacity=_capacity)
        self._filename = filename

    def __len__(self):
        return len(self._entries)

    def __contains__(self, entry_id):
        return entry_id in self._entries

    def __repr__(self):
        return "{}(visibility={!r}, base_url={!r}, entries={})".format(
            self.__class__.__name__, self._visibility, self._base_url, len(self._entries))

    # -- properties

    @property
    def visibility(self):
        return self._visibility

    @property
    def base_url(self):
        return self._base_url

    @property
    def retired_ids(self):
        with self._lock:
            return frozenset(self._retired_ids)

    @property
    def cache(self):
        return self._cache

    @property
    def filename(self):
        return self._filename

    # -- persistence

    @classmethod
    def from_file(cls, filename, **kwargs):
        """Open a store file; a missing file yields an empty store bound to that file."""
        from ..representation import read_file
        if not os.path.exists(filename):
            logger.info("Store file '%s' not found: starting with an empty registry", filename)
            return cls(filename=filename, **kwargs)
        _loaded = read_file('store', filename, 'json')
        _kwargs = dict(visibility=_loaded.visibility, base_url=_loaded.base_url)
        _kwargs.update(kwargs)
        return cls(entries=_loaded.entries(), retired_ids=_loaded.retired_ids, filename=filename, **_kwargs)

    def to_file(self, filename=None):
        from ..representation import write_file
        _filename = filename or self._filename
        if _filename is None:
            raise RegistryError("No store file name given!")
        with self._lock:
            write_file(self, 'store', _filename, 'json')

    def _persist(self):
        if self._filename is not None:
            self.to_file()

    def dump(self):
        """the registry dump document (JSON array of entry documents, ordered by name and id)"""
        from ..representation import get_writer
        return get_writer('registry', 'json').make_document(self.entries())

    def load(self, document):
        """register all entries of a registry dump document; returns their ids"""
        from ..representation import get_reader
        return [self.register(_entry) for _entry in get_reader('registry', 'json').make_object(document)]

    # -- reading

    def entries(self):
        """snapshot of all entries, ordered by (name, id)"""
        with self._lock:
            _entries = list(self._entries.values())
        return sorted(_entries, key=lambda _e: (_e.name or '', _e.id or ''))

    def get(self, entry_id):
        with self._lock:
            try:
                return self._entries[entry_id]
            except KeyError:
                raise RegistryNotFoundError("No entry with id '{}'".format(entry_id))

    def url_for(self, entry_id):
        """the namespace URL of an entry"""
        self.get(entry_id)
        return "{}/entries/{}".format(self._base_url.rstrip('/'), entry_id)

    def search(self, query=None, principal=None):
        """
        Entries matching all facets of `query`, ordered by (name, id).

        Keywords match case-insensitive substrings of name, title or description; tags and
        categories must be contained in the entry. A principal holding only the guest role sees
        only public entries.
        """
        _query = SearchQuery.from_document(query)
        return [_e for _e in self.entries() if visible_to(_e, principal) and _query.matches(_e)]

    def resolve_namespace(self, url):
        """
        Classify a namespace URL as a ``service-endpoint`` (some entry's endpoint) or a
        ``code-base`` (some entry's source).
        """
        if not is_url(url):
            raise RegistryError("Not a valid URL: {!r}".format(url))
        _entries = self.entries()
        if any(_e.endpoint == url for _e in _entries):
            return SERVICE_ENDPOINT
        if any(_e.source == url for _e in _entries):
            return CODE_BASE
        raise RegistryNotFoundError("URL '{}' is not known to this registry".format(url))

    # -- mutation

    def _checked(self, entry):
        _report = validate_entry(entry, role_for_entry_class(entry.entry_class))
        _class_problems = _class_invariant_problems(entry)
        if _class_problems:
            _report = _report._replace(valid=False, violations=_report.violations + tuple(_class_problems))
        if not _report.valid:
            raise EntryValidationError(_report)
        return entry

    def register(self, entry):
        """
        Validate and store a new entry.

        A fresh UUID is assigned if the entry carries no id; missing ``created``/``modified``
        timestamps are set to the current time.

        :return: the id of the stored entry
        :raise RegistryConflictError: if the id is already in use or was retired
        :raise EntryValidationError: if the entry is invalid for the role implied by its class
        """
        with self._lock:
            _id = entry.id
            if is_present(_id):
                if _id in self._entries or _id in self._retired_ids:
                    raise RegistryConflictError("Entry id '{}' is already in use".format(_id))
            else:
                _id = new_uuid()
                while _id in self._entries or _id in self._retired_ids:
                    _id = new_uuid()
            _now = self._clock()
            _created = entry.created or _now
            _modified = entry.modified or max(_now, _created)
            _entry = self._checked(entry._replace(id=_id, created=_created, modified=_modified))
            self._entries[_id] = _entry
            try:
                self._persist()
            except Exception:
                del self._entries[_id]
                raise
        logger.info("Registered entry '%s' (%s)", _entry.name, _id)
        return _id

    def update(self, entry):
        """
        Replace a stored entry. ``created`` is kept, ``modified`` advances strictly.

        :raise RegistryNotFoundError: for an unknown id
        :raise EntryValidationError: if the new version is invalid; the stored one is kept
        """
        with self._lock:
            _old = self.get(entry.id)
            _now = self._clock()
            _modified = max(_now, _old.modified + datetime.timedelta(seconds=1))
            _entry = self._checked(entry._replace(created=_old.created, modified=_modified))
            self._entries[_entry.id] = _entry
            try:
                self._persist()
            except Exception:
                self._entries[_entry.id] = _old
                raise
        logger.info("Updated entry '%s' (%s)", _entry.name, _entry.id)
        return _entry

    def remove(self, entry_id):
        with self._lock:
            _entry = self.get(entry_id)
            del self._entries[entry_id]
            self._retired_ids.add(entry_id)
            self._persist()
        logger.info("Removed entry '%s' (%s)", _entry.name, entry_id)
        return _entry

    # -- service interaction

    def check_heartbeat(self, entry_id, prober=None):
        """
        Probe the endpoint of an entry once and record the result.

        :param prober: callable ``prober(url, timeout) -> bool``; HTTP GET by default
        :rtype: :py:class:`~asf.core.entry.HeartbeatStatus`
        :raise NotApplicableError: for library entries and entries without endpoint
        """
        _entry = self.get(entry_id)
        if _entry.entry_class == LIBRARY or not is_present(_entry.endpoint):
            raise NotApplicableError("Heartbeat is not applicable to library entry '{}'".format(_entry.name))
        if prober is None:
            from .heartbeat import HttpProber
            prober = HttpProber()
        _alive = prober(_entry.endpoint, kc('registry', 'heartbeat_timeout'))
        _status = HeartbeatStatus(state='alive' if _alive else 'dead', checked_at=self._clock())
        with self._lock:
            _current = self._entries.get(entry_id)
            if _current is not None:
                # heartbeat updates leave 'modified' unchanged
                self._entries[entry_id] = _current._replace(heartbeat=_status)
                self._persist()
        logger.info("Heartbeat of '%s': %s", _entry.name, _status.state)
        return _status

    def cached_invoke(self, entry_id, request, now=None, invoker=None):
        """
        Invoke the service of an entry through the LRU response cache.

        An identical request answered within ``caching_interval`` seconds is served from the
        cache. Failed invocations raise and are not cached.

        :param now: current time in seconds; ``time.time()`` if omitted
        :param invoker: callable ``invoker(entry, request) -> response``; HTTP POST by default
        """
        _entry = self.get(entry_id)
        if not is_present(_entry.caching_interval):
            raise NotApplicableError("Entry '{}' has no caching interval".format(_entry.name))
        _now = time.time() if now is None else now
        _key = (entry_id, canonical_json(request))
        _hit, _response = self._cache.get(_key, now=_now, ttl=_entry.caching_interval)
        if _hit:
            logger.debug("Cache hit for '%s'", _entry.name)
            return _response
        logger.debug("Cache miss for '%s'", _entry.name)
        if invoker is None:
            from .heartbeat import HttpInvoker
            invoker = HttpInvoker()
        _response = invoker(_entry, request)
        self._cache.put(_key, _response, now=_now)
        return _response
