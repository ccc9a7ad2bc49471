import abc
import six

from . import _AVAILABLE_REPRESENTATIONS
from ._base import GenericDReprBase, DReprError
from ._yaml_base import YamlWriterMixin, YamlReaderMixin

__all__ = ['ExperimentYamlWriter', 'ExperimentYamlReader']


@six.add_metaclass(abc.ABCMeta)
class ExperimentDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'experiment'
    KNOWN_KEYWORDS = ('name', 'parameters', 'experiments')
    REQUIRED_KEYWORDS = ('name',)


class ExperimentYamlWriter(YamlWriterMixin, ExperimentDReprBase):

    def __init__(self, experiment_config, output_io_handle):
        super(ExperimentYamlWriter, self).__init__(asf_object=experiment_config, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, experiment_config):
        return experiment_config.to_document()


class ExperimentYamlReader(YamlReaderMixin, ExperimentDReprBase):

    def __init__(self, input_io_handle):
        super(ExperimentYamlReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def _convert_document_to_object(cls, document):
        from ..experiment.config import ExperimentConfig
        _parameters = document.get('parameters') or {}
        _experiments = document.get('experiments') or {}
        if not isinstance(_parameters, dict):
            raise DReprError("'parameters' must be a mapping, got {!r}".format(_parameters))
        if not isinstance(_experiments, dict):
            raise DReprError("'experiments' must be a mapping, got {!r}".format(_experiments))
        # YAML mappings keep their document order, which fixes the expansion order
        return ExperimentConfig(name=document['name'], parameters=_parameters,
                                experiments=list(_experiments.items()))


ExperimentYamlWriter._register_class(_AVAILABLE_REPRESENTATIONS)
ExperimentYamlReader._register_class(_AVAILABLE_REPRESENTATIONS)
