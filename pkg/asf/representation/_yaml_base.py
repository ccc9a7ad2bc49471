import yaml

from ._base import DReprWriterMixin, DReprReaderMixin, DReprError

__all__ = ['YamlWriterMixin', 'YamlReaderMixin']


class YamlWriterMixin(DReprWriterMixin):

    DREPR_FLAVOR_NAME = 'yaml'
    DUMPER = yaml.SafeDumper

    # insertion order is kept: job and experiment order carry meaning
    @classmethod
    def _dump(cls, document, output_stream):
        yaml.dump(document, output_stream, Dumper=cls.DUMPER, default_flow_style=False, sort_keys=False)


class YamlReaderMixin(DReprReaderMixin):

    DREPR_FLAVOR_NAME = 'yaml'
    LOADER = yaml.SafeLoader

    @classmethod
    def _load(cls, input_stream):
        try:
            return yaml.load(input_stream, cls.LOADER)
        except yaml.YAMLError as _e:
            raise DReprError("Cannot parse {} document: {}".format(cls.BASE_OBJECT_TYPE_NAME, _e))

    @classmethod
    def from_text(cls, text):
        """read an object from a YAML string"""
        return cls.make_object(cls._load(text))
