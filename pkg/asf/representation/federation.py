import abc
import six

from . import _AVAILABLE_REPRESENTATIONS
from ._base import GenericDReprBase, DReprError
from ._json_base import JsonWriterMixin, JsonReaderMixin
from .entry import RegistryDumpJsonWriter, RegistryDumpJsonReader

__all__ = ['FederationJsonWriter', 'FederationJsonReader']


@six.add_metaclass(abc.ABCMeta)
class FederationDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'federation'
    KNOWN_KEYWORDS = ('duplicate_policy', 'members', 'enrichments')
    REQUIRED_KEYWORDS = ('members',)


class FederationJsonWriter(JsonWriterMixin, FederationDReprBase):
    """writes a federated view together with the entries of all its members"""

    def __init__(self, view, output_io_handle):
        super(FederationJsonWriter, self).__init__(asf_object=view, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, view):
        return dict(
            duplicate_policy=view.duplicate_policy,
            members=[dict(label=_label, entries=RegistryDumpJsonWriter.make_document(_store.entries()))
                     for _label, _store in view.members],
            enrichments=dict((_id, _e.to_document()) for _id, _e in six.iteritems(view.enrichments)),
        )


class FederationJsonReader(JsonReaderMixin, FederationDReprBase):

    def __init__(self, input_io_handle):
        super(FederationJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def _convert_document_to_object(cls, document):
        from ..federation.view import FederatedView, Enrichment, LATEST_MODIFIED
        from ..registry.store import RegistryStore
        _members = []
        for _member in document['members']:
            if not isinstance(_member, dict) or 'label' not in _member:
                raise DReprError("Federation member needs a label: {!r}".format(_member))
            _entries = RegistryDumpJsonReader.make_object(_member.get('entries', []))
            _members.append((_member['label'], RegistryStore(entries=_entries)))
        _enrichments = dict((_id, Enrichment.from_document(_doc))
                            for _id, _doc in six.iteritems(document.get('enrichments') or {}))
        return FederatedView(_members, duplicate_policy=document.get('duplicate_policy', LATEST_MODIFIED),
                             enrichments=_enrichments)


FederationJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
FederationJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
