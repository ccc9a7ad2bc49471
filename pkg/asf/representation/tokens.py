import abc
import six

from ..tools import format_timestamp, parse_timestamp
from . import _AVAILABLE_REPRESENTATIONS
from ._base import GenericDReprBase, DReprError
from ._json_base import JsonWriterMixin, JsonReaderMixin

__all__ = ['TokensJsonWriter', 'TokensJsonReader']


@six.add_metaclass(abc.ABCMeta)
class TokensDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'tokens'
    KNOWN_KEYWORDS = ('token', 'subject', 'roles', 'loa', 'expires', 'last_used')
    REQUIRED_KEYWORDS = ('token', 'subject', 'roles')


class TokensJsonWriter(JsonWriterMixin, TokensDReprBase):

    def __init__(self, token_store, output_io_handle):
        super(TokensJsonWriter, self).__init__(asf_object=token_store, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, token_store):
        _document = []
        for _record in token_store.records():
            _doc = dict(token=_record.token, subject=_record.subject, roles=sorted(_record.roles), loa=_record.loa)
            if _record.expires is not None:
                _doc['expires'] = format_timestamp(_record.expires)
            if _record.last_used is not None:
                _doc['last_used'] = format_timestamp(_record.last_used)
            _document.append(_doc)
        return _document


class TokensJsonReader(JsonReaderMixin, TokensDReprBase):

    def __init__(self, input_io_handle):
        super(TokensJsonReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def make_object(cls, document):
        from ..security.auth import TokenRecord, TokenStore
        if not isinstance(document, list):
            raise DReprError("A token file must contain a JSON array, got {}!".format(type(document).__name__))
        _records = []
        for _item in document:
            cls._check_keywords(_item)
            _doc = dict(_item)
            try:
                for _key in ('expires', 'last_used'):
                    _doc[_key] = parse_timestamp(_doc.get(_key))
                _records.append(TokenRecord(**_doc))
            except ValueError as _e:
                raise DReprError("Invalid token record for subject '{}': {}".format(_item.get('subject'), _e))
        return TokenStore(_records)


TokensJsonWriter._register_class(_AVAILABLE_REPRESENTATIONS)
TokensJsonReader._register_class(_AVAILABLE_REPRESENTATIONS)
