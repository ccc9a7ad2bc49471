"""
Federated registry view.

A :py:class:`FederatedView` is an immutable snapshot indexing the entries of several member
registries by id. Enrichments (ratings, cost comparisons, ...) live in the view only and never
touch the member registries.
"""

import datetime
import logging
import numbers

from collections import namedtuple

import six

from ..registry.store import SearchQuery, visible_to

__all__ = ['FederatedView', 'Enrichment', 'FederationError', 'EnrichmentError', 'federate',
           'federated_search', 'enrich', 'DUPLICATE_POLICIES', 'LATEST_MODIFIED', 'FIRST_MEMBER']

logger = logging.getLogger(__name__)

LATEST_MODIFIED = 'latest-modified'
FIRST_MEMBER = 'first-member'
DUPLICATE_POLICIES = (LATEST_MODIFIED, FIRST_MEMBER)


class FederationError(Exception):
    pass


class EnrichmentError(FederationError):
    pass


class Enrichment(namedtuple('Enrichment', ('cost_comparison', 'rating', 'benchmark_note', 'sla_note',
                                           'carbon_cost'))):
    """Broker-side information added to a federated entry."""
    __slots__ = ()

    def __new__(cls, cost_comparison=None, rating=None, benchmark_note=None, sla_note=None, carbon_cost=None):
        if rating is not None:
            if not isinstance(rating, numbers.Real) or isinstance(rating, bool) or not 0 <= rating <= 5:
                raise EnrichmentError("Rating must be a number in [0, 5], got {!r}".format(rating))
        if carbon_cost is not None:
            if not isinstance(carbon_cost, numbers.Real) or isinstance(carbon_cost, bool) or carbon_cost < 0:
                raise EnrichmentError("Carbon cost must be a number >= 0, got {!r}".format(carbon_cost))
        return super(Enrichment, cls).__new__(cls, cost_comparison, rating, benchmark_note, sla_note, carbon_cost)

    @classmethod
    def from_document(cls, document):
        try:
            return cls(**document)
        except TypeError as _e:
            raise EnrichmentError("Invalid enrichment {!r}: {}".format(document, _e))

    def to_document(self):
        return dict((_k, _v) for _k, _v in six.iteritems(self._asdict()) if _v is not None)


def _modified(entry):
    return entry.modified or datetime.datetime.min


class FederatedView(object):
    """
    Single lookup interface over several registries.

    :param members: list of ``(label, store)`` pairs; labels must be unique
    :param duplicate_policy: ``latest-modified`` (ties go to the lexicographically smallest label)
                             or ``first-member``
    :param enrichments: mapping id -> :py:class:`Enrichment`
    """

    def __init__(self, members=(), duplicate_policy=LATEST_MODIFIED, enrichments=None):
        _members = list(members)
        _labels = [_label for _label, _ in _members]
        if len(set(_labels)) != len(_labels):
            raise FederationError("Duplicate member labels: {}".format(
                sorted(set(_l for _l in _labels if _labels.count(_l) > 1))))
        if duplicate_policy not in DUPLICATE_POLICIES:
            raise FederationError("Unknown duplicate policy '{}'! Expected one of {}.".format(
                duplicate_policy, DUPLICATE_POLICIES))
        self._members = tuple(_members)
        self._policy = duplicate_policy
        self._index = self._build_index()
        self._enrichments = dict((_id, _e) for _id, _e in six.iteritems(enrichments or {}) if _id in self._index)

    def _build_index(self):
        _index = dict()
        for _label, _store in self._members:
            for _entry in _store.entries():
                _current = _index.get(_entry.id)
                if _current is None:
                    _index[_entry.id] = (_label, _entry)
                    continue
                if self._policy == FIRST_MEMBER:
                    continue
                _current_label, _current_entry = _current
                if (_modified(_entry), _current_label) > (_modified(_current_entry), _label):
                    _index[_entry.id] = (_label, _entry)
        return _index

    def __len__(self):
        return len(self._index)

    def __contains__(self, entry_id):
        return entry_id in self._index

    @property
    def members(self):
        return self._members

    @property
    def labels(self):
        return tuple(_label for _label, _ in self._members)

    @property
    def duplicate_policy(self):
        return self._policy

    @property
    def enrichments(self):
        return dict(self._enrichments)

    def lookup(self, entry_id):
        """
        :return: ``(origin label, entry, enrichment or None)``
        :raise FederationError: for an unknown id
        """
        try:
            _origin, _entry = self._index[entry_id]
        except KeyError:
            raise FederationError("No entry with id '{}' in the federated view".format(entry_id))
        return _origin, _entry, self._enrichments.get(entry_id)

    def items(self):
        """all ``(origin, entry)`` pairs ordered by (name, id)"""
        return sorted(self._index.values(), key=lambda _p: (_p[1].name or '', _p[1].id))

    def search(self, query=None, principal=None):
        _query = SearchQuery.from_document(query)
        return [(_origin, _entry) for _origin, _entry in self.items()
                if visible_to(_entry, principal) and _query.matches(_entry)]

    def with_enrichment(self, entry_id, enrichment):
        if entry_id not in self._index:
            raise FederationError("No entry with id '{}' in the federated view".format(entry_id))
        if not isinstance(enrichment, Enrichment):
            enrichment = Enrichment.from_document(enrichment)
        _enrichments = dict(self._enrichments)
        _enrichments[entry_id] = enrichment
        _view = self.__class__.__new__(self.__class__)
        _view._members = self._members
        _view._policy = self._policy
        _view._index = self._index
        _view._enrichments = _enrichments
        return _view

    def rebuild(self):
        """re-federate from the current state of the members, keeping enrichments of surviving ids"""
        return self.__class__(self._members, duplicate_policy=self._policy, enrichments=self._enrichments)

    def to_document(self, principal=None):
        _items = []
        for _origin, _entry in self.search(principal=principal):
            _item = dict(origin=_origin, entry=_entry.to_document())
            if _entry.id in self._enrichments:
                _item['enrichment'] = self._enrichments[_entry.id].to_document()
            _items.append(_item)
        return _items


def federate(registries, duplicate_policy=LATEST_MODIFIED):
    """
    Build a federated view over ``(label, store)`` pairs.

    :rtype: :py:class:`FederatedView`
    :raise FederationError: for duplicate labels
    """
    _view = FederatedView(registries, duplicate_policy=duplicate_policy)
    logger.info("Federated %d registries into a view of %d entries", len(_view.members), len(_view))
    return _view


def federated_search(view, query=None, principal=None):
    """matching ``(origin, entry)`` pairs over all members, ordered by (name, id)"""
    return view.search(query, principal=principal)


def enrich(view, entry_id, enrichment):
    """
    :return: a new view carrying the enrichment; `view` and its members are unchanged
    :raise EnrichmentError: for an invalid enrichment
    :raise FederationError: for an unknown id
    """
    return view.with_enrichment(entry_id, enrichment)
