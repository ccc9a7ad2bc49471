import datetime
import os
import unittest

from asf.registry import (RegistryStore, RegistryError, EntryValidationError, RegistryConflictError,
                          RegistryNotFoundError, NotApplicableError, HttpProber, SERVICE_ENDPOINT, CODE_BASE)
from asf.security import Principal, GUEST, MEMBER
from asf.test.tools import (make_entry, make_library_entry, ENTRY_ID, FixedClock, FakeProber, FakeInvoker,
                            TempDirTestMixin)


class TestRegistryStore(unittest.TestCase):

    def setUp(self):
        self._clock = FixedClock()
        self._store = RegistryStore(base_url='http://registry.example.org', clock=self._clock)
        self._entry = make_entry()

    def test_register_and_get(self):
        _id = self._store.register(self._entry)
        self.assertEqual(_id, ENTRY_ID)
        self.assertEqual(self._store.get(_id), self._entry)
        self.assertEqual(len(self._store), 1)

    def test_register_assigns_id_and_timestamps(self):
        _id = self._store.register(self._entry._replace(id=None, created=None, modified=None,
                                                        specification_schema='https://example.org/schema.json'))
        _stored = self._store.get(_id)
        self.assertNotEqual(_id, ENTRY_ID)
        self.assertEqual(_stored.created, self._clock.now)
        self.assertEqual(_stored.modified, self._clock.now)

    def test_register_duplicate_id(self):
        self._store.register(self._entry)
        with self.assertRaises(RegistryConflictError):
            self._store.register(self._entry)

    def test_removed_id_is_never_reused(self):
        self._store.register(self._entry)
        self._store.remove(ENTRY_ID)
        self.assertIn(ENTRY_ID, self._store.retired_ids)
        with self.assertRaises(RegistryConflictError):
            self._store.register(self._entry)

    def test_register_invalid_entry(self):
        with self.assertRaises(EntryValidationError) as _cm:
            self._store.register(self._entry._replace(title=None))
        self.assertIn("title required", _cm.exception.report.violations)
        self.assertEqual(len(self._store), 0)

    def test_instantiated_service_needs_endpoint(self):
        with self.assertRaises(EntryValidationError):
            self._store.register(self._entry._replace(endpoint=None))

    def test_library_must_not_have_endpoint(self):
        with self.assertRaises(EntryValidationError):
            self._store.register(make_library_entry(endpoint='https://example.org/lib'))
        self._store.register(make_library_entry())

    def test_update_advances_modified(self):
        self._store.register(self._entry)
        _updated = self._store.update(self._entry._replace(version='1.3.0'))
        self.assertEqual(_updated.version, '1.3.0')
        self.assertEqual(_updated.created, self._entry.created)
        self.assertGreater(_updated.modified, self._entry.modified)
        _again = self._store.update(_updated._replace(version='1.4.0'))
        self.assertGreater(_again.modified, _updated.modified)

    def test_update_invalid_keeps_stored_version(self):
        self._store.register(self._entry)
        with self.assertRaises(EntryValidationError):
            self._store.update(self._entry._replace(license=None))
        self.assertEqual(self._store.get(ENTRY_ID).license, 'MIT')

    def test_unknown_id(self):
        with self.assertRaises(RegistryNotFoundError):
            self._store.get(ENTRY_ID)
        with self.assertRaises(RegistryNotFoundError):
            self._store.remove(ENTRY_ID)

    def test_search_facets(self):
        self._store.register(self._entry)
        self._store.register(make_library_entry())
        self.assertEqual([_e.name for _e in self._store.search()], ['deep-nlp', 'eq-forecast'])
        self.assertEqual([_e.name for _e in self._store.search(dict(keywords=['NOWCASTING']))], ['eq-forecast'])
        self.assertEqual([_e.name for _e in self._store.search(dict(tags=['nlp']))], ['deep-nlp'])
        self.assertEqual(self._store.search(dict(tags=['nlp'], categories=['finance'])), [])

    def test_search_unknown_facet(self):
        with self.assertRaises(RegistryError):
            self._store.search(dict(colour='blue'))

    def test_guest_sees_only_public_entries(self):
        self._store.register(self._entry._replace(public=False))
        self.assertEqual(self._store.search(principal=Principal('visitor', [GUEST])), [])
        self.assertEqual(len(self._store.search(principal=Principal('alice', [MEMBER]))), 1)

    def test_namespace(self):
        self._store.register(self._entry)
        self.assertEqual(self._store.url_for(ENTRY_ID),
                         'http://registry.example.org/entries/{}'.format(ENTRY_ID))
        self.assertEqual(self._store.resolve_namespace(self._entry.endpoint), SERVICE_ENDPOINT)
        self.assertEqual(self._store.resolve_namespace(self._entry.source), CODE_BASE)
        with self.assertRaises(RegistryNotFoundError):
            self._store.resolve_namespace('https://unknown.example.org')

    def test_dump_and_load(self):
        self._store.register(self._entry)
        _other = RegistryStore(clock=self._clock)
        self.assertEqual(_other.load(self._store.dump()), [ENTRY_ID])
        self.assertEqual(_other.get(ENTRY_ID), self._entry)


class TestHeartbeatAndCache(unittest.TestCase):

    def setUp(self):
        self._clock = FixedClock()
        self._store = RegistryStore(clock=self._clock)
        self._store.register(make_entry())

    def test_heartbeat_alive_and_dead(self):
        _prober = FakeProber(alive=True)
        _status = self._store.check_heartbeat(ENTRY_ID, prober=_prober)
        self.assertEqual(_status.state, 'alive')
        self.assertEqual(_prober.calls, [make_entry().endpoint])
        self._clock.advance(60)
        _status = self._store.check_heartbeat(ENTRY_ID, prober=FakeProber(alive=False))
        self.assertEqual(_status.state, 'dead')
        self.assertEqual(self._store.get(ENTRY_ID).heartbeat, _status)

    def test_heartbeat_leaves_modified_unchanged(self):
        _before = self._store.get(ENTRY_ID).modified
        self._store.check_heartbeat(ENTRY_ID, prober=FakeProber())
        self.assertEqual(self._store.get(ENTRY_ID).modified, _before)

    def test_heartbeat_not_applicable_to_library(self):
        self._store.register(make_library_entry())
        with self.assertRaises(NotApplicableError):
            self._store.check_heartbeat(make_library_entry().id, prober=FakeProber())

    def test_cached_invoke(self):
        _invoker = FakeInvoker()
        _first = self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=0.0, invoker=_invoker)
        _second = self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=3599.0, invoker=_invoker)
        self.assertEqual(_first, _second)
        self.assertEqual(_invoker.calls, 1)
        self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=3601.0, invoker=_invoker)
        self.assertEqual(_invoker.calls, 2)
        self._store.cached_invoke(ENTRY_ID, dict(region='jp'), now=3601.0, invoker=_invoker)
        self.assertEqual(_invoker.calls, 3)

    def test_failed_invoke_is_not_cached(self):
        _invoker = FakeInvoker(failures=1)
        with self.assertRaises(IOError):
            self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=0.0, invoker=_invoker)
        _response = self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=1.0, invoker=_invoker)
        self.assertEqual(_invoker.calls, 2)
        self.assertEqual(_response['call'], 2)
        self.assertEqual(self._store.cached_invoke(ENTRY_ID, dict(region='ca'), now=2.0, invoker=_invoker), _response)
        self.assertEqual(_invoker.calls, 2)

    def test_cached_invoke_without_interval(self):
        self._store.update(self._store.get(ENTRY_ID)._replace(caching_interval=None))
        with self.assertRaises(NotApplicableError):
            self._store.cached_invoke(ENTRY_ID, {}, now=0.0, invoker=FakeInvoker())


class _Response(object):

    def __init__(self, ok):
        self.ok = ok


class _Session(object):

    def __init__(self, ok=True, error=None):
        self._ok = ok
        self._error = error

    def get(self, url, timeout=None):
        if self._error is not None:
            raise self._error
        return _Response(self._ok)


class TestHttpProber(unittest.TestCase):

    def test_ok_response_is_alive(self):
        self.assertTrue(HttpProber(session=_Session(ok=True))('https://example.org', 1.0))
        self.assertFalse(HttpProber(session=_Session(ok=False))('https://example.org', 1.0))

    def test_connection_error_is_dead(self):
        import requests
        _prober = HttpProber(session=_Session(error=requests.ConnectionError("refused")))
        self.assertFalse(_prober('https://example.org', 1.0))


class TestStorePersistence(TempDirTestMixin, unittest.TestCase):

    def setUp(self):
        super(TestStorePersistence, self).setUp()
        self._filename = os.path.join(self._tmp_dir, 'store.json')

    def test_missing_file_gives_empty_store(self):
        _store = RegistryStore.from_file(self._filename)
        self.assertEqual(len(_store), 0)
        self.assertFalse(os.path.exists(self._filename))

    def test_mutations_are_written_through(self):
        _store = RegistryStore.from_file(self._filename, visibility='private', base_url='http://a.example.org',
                                         clock=FixedClock())
        _store.register(make_entry())
        _store.register(make_library_entry())
        _store.remove(make_library_entry().id)
        _reopened = RegistryStore.from_file(self._filename)
        self.assertEqual(_reopened.visibility, 'private')
        self.assertEqual(_reopened.base_url, 'http://a.example.org')
        self.assertEqual(_reopened.entries(), [make_entry()])
        self.assertIn(make_library_entry().id, _reopened.retired_ids)

    def test_unknown_visibility(self):
        with self.assertRaises(RegistryError):
            RegistryStore(visibility='secret')
