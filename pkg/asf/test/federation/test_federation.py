import datetime
import itertools
import random
import unittest
import uuid

from asf.federation import (federate, federated_search, enrich, merge_catalogs, export_catalog, project_to_catalog,
                            read_catalog, FederationError, EnrichmentError, CatalogError, FIRST_MEMBER)
from asf.registry import RegistryStore
from asf.security import Principal, GUEST
from asf.test.tools import make_entry, ENTRY_ID


def _random_registries(rng, labels=('A', 'B', 'C'), max_entries=10):
    _ids = [str(uuid.UUID(int=rng.getrandbits(128))) for _ in range(12)]
    _base = datetime.datetime(2021, 1, 1)
    _registries = []
    for _label in labels:
        _entries = []
        for _id in rng.sample(_ids, rng.randint(0, max_entries)):
            _entries.append(make_entry(
                id=_id, name='svc-{}'.format(_ids.index(_id) % 5),
                modified=_base + datetime.timedelta(days=rng.randint(0, 3)),
                description='offered by {}'.format(_label)))
        _registries.append((_label, RegistryStore(entries=_entries)))
    return _registries


def _union_oracle(registries):
    _candidates = dict()
    for _label, _store in sorted(registries, key=lambda _r: _r[0]):
        for _entry in _store.entries():
            _candidates.setdefault(_entry.id, []).append((_label, _entry))
    _winners = []
    for _id, _pairs in _candidates.items():
        # max returns the first maximal pair, i.e. the smallest label among equal timestamps
        _winners.append(max(_pairs, key=lambda _p: _p[1].modified))
    return sorted(_winners, key=lambda _p: (_p[1].name, _p[1].id))


class TestFederatedView(unittest.TestCase):

    def setUp(self):
        self._old = make_entry(description='old copy')
        self._new = make_entry(description='new copy', modified=self._old.modified + datetime.timedelta(days=1))
        self._a = RegistryStore(entries=[self._new])
        self._b = RegistryStore(entries=[self._old])

    def test_latest_modified_wins(self):
        _view = federate([('b', self._b), ('a', self._a)])
        _origin, _entry, _enrichment = _view.lookup(ENTRY_ID)
        self.assertEqual((_origin, _entry.description, _enrichment), ('a', 'new copy', None))

    def test_equal_timestamps_go_to_smallest_label(self):
        _view = federate([('zeta', RegistryStore(entries=[self._old])),
                          ('alpha', RegistryStore(entries=[self._old._replace(description='alpha copy')]))])
        self.assertEqual(_view.lookup(ENTRY_ID)[0], 'alpha')

    def test_first_member_policy(self):
        _view = federate([('b', self._b), ('a', self._a)], duplicate_policy=FIRST_MEMBER)
        self.assertEqual(_view.lookup(ENTRY_ID)[0], 'b')

    def test_duplicate_labels(self):
        with self.assertRaises(FederationError):
            federate([('a', self._a), ('a', self._b)])

    def test_unknown_policy(self):
        with self.assertRaises(FederationError):
            federate([('a', self._a)], duplicate_policy='random')

    def test_search_and_visibility(self):
        _private = make_entry(id=str(uuid.UUID(int=7)), name='hidden', public=False)
        _view = federate([('a', self._a), ('c', RegistryStore(entries=[_private]))])
        self.assertEqual([_e.name for _o, _e in federated_search(_view)], ['eq-forecast', 'hidden'])
        self.assertEqual([_e.name for _o, _e in federated_search(_view, principal=Principal('guest', [GUEST]))],
                         ['eq-forecast'])
        self.assertEqual(federated_search(_view, dict(keywords=['new copy']))[0][0], 'a')

    def test_enrichment_stays_in_view(self):
        _view = federate([('a', self._a)])
        _enriched = enrich(_view, ENTRY_ID, dict(rating=4.5, cost_comparison='cheapest'))
        self.assertEqual(_enriched.lookup(ENTRY_ID)[2].rating, 4.5)
        self.assertIsNone(_view.lookup(ENTRY_ID)[2])
        self.assertEqual(self._a.get(ENTRY_ID), self._new)

    def test_invalid_enrichment(self):
        _view = federate([('a', self._a)])
        with self.assertRaises(EnrichmentError):
            enrich(_view, ENTRY_ID, dict(stars=5))
        with self.assertRaises(FederationError):
            enrich(_view, str(uuid.UUID(int=1)), dict(rating=1.0))

    def test_matches_union_oracle(self):
        _rng = random.Random(1234)
        for _ in range(50):
            _registries = _random_registries(_rng)
            _view = federate(_registries)
            _result = [(_o, _e.id, _e.modified) for _o, _e in federated_search(_view)]
            _expected = [(_o, _e.id, _e.modified) for _o, _e in _union_oracle(_registries)]
            self.assertEqual(_result, _expected)


class TestCatalogs(unittest.TestCase):

    def test_projection_drops_heartbeat(self):
        _item = project_to_catalog(make_entry())
        self.assertFalse(hasattr(_item, 'heartbeat'))
        self.assertNotIn('heartbeat', _item.to_document())

    def test_export_respects_visibility(self):
        _store = RegistryStore(entries=[make_entry(public=False)])
        self.assertEqual(len(export_catalog(_store)), 1)
        self.assertEqual(export_catalog(_store, principal=Principal('guest', [GUEST])), [])

    def test_merge_keeps_latest(self):
        _old = make_entry(version='1.0.0')
        _new = make_entry(version='2.0.0', modified=_old.modified + datetime.timedelta(hours=1))
        _merged = merge_catalogs([export_catalog(RegistryStore(entries=[_new])),
                                  export_catalog(RegistryStore(entries=[_old]))])
        self.assertEqual([_d['version'] for _d in _merged], ['2.0.0'])

    def test_merge_is_order_insensitive(self):
        _rng = random.Random(99)
        for _ in range(20):
            _catalogs = [export_catalog(_store) for _label, _store in _random_registries(_rng)]
            _results = [merge_catalogs(list(_p)) for _p in itertools.permutations(_catalogs)]
            for _result in _results[1:]:
                self.assertEqual(_result, _results[0])

    def test_heartbeat_not_allowed_in_catalog(self):
        with self.assertRaises(CatalogError):
            read_catalog([make_entry().to_document()])
        with self.assertRaises(CatalogError):
            merge_catalogs([{'id': ENTRY_ID}])
