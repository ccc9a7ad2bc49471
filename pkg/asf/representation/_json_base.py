import json

from ._base import DReprWriterMixin, DReprReaderMixin, DReprError

__all__ = ['JsonWriterMixin', 'JsonReaderMixin']


class JsonWriterMixin(DReprWriterMixin):

    DREPR_FLAVOR_NAME = 'json'
    INDENT = 2

    # sorted keys: equal objects give byte-identical files
    @classmethod
    def _dump(cls, document, output_stream):
        json.dump(document, output_stream, indent=cls.INDENT, sort_keys=True)
        output_stream.write('\n')

    @classmethod
    def to_text(cls, asf_object):
        return json.dumps(cls.make_document(asf_object), indent=cls.INDENT, sort_keys=True)


class JsonReaderMixin(DReprReaderMixin):

    DREPR_FLAVOR_NAME = 'json'

    @classmethod
    def _load(cls, input_stream):
        try:
            if hasattr(input_stream, 'read'):
                return json.load(input_stream)
            return json.loads(input_stream)
        except ValueError as _e:
            raise DReprError("Cannot parse {} document: {}".format(cls.BASE_OBJECT_TYPE_NAME, _e))

    @classmethod
    def from_text(cls, text):
        """read an object from a JSON string"""
        return cls.make_object(cls._load(text))
