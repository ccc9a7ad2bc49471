import abc
import six

from . import _AVAILABLE_REPRESENTATIONS
from ._base import GenericDReprBase, DReprError
from ._yaml_base import YamlWriterMixin, YamlReaderMixin

__all__ = ['WorkflowYamlWriter', 'WorkflowYamlReader']

_JOB_KEYWORDS = ('name', 'kind', 'command', 'depends_on', 'env', 'workdir')


@six.add_metaclass(abc.ABCMeta)
class WorkflowDReprBase(GenericDReprBase):
    BASE_OBJECT_TYPE_NAME = 'workflow'
    KNOWN_KEYWORDS = ('name', 'jobs')
    REQUIRED_KEYWORDS = ('name', 'jobs')


class WorkflowYamlWriter(YamlWriterMixin, WorkflowDReprBase):

    def __init__(self, workflow, output_io_handle):
        super(WorkflowYamlWriter, self).__init__(asf_object=workflow, output_io_handle=output_io_handle)

    @classmethod
    def make_document(cls, workflow):
        return workflow.to_document()


class WorkflowYamlReader(YamlReaderMixin, WorkflowDReprBase):

    def __init__(self, input_io_handle):
        super(WorkflowYamlReader, self).__init__(input_io_handle=input_io_handle)

    @classmethod
    def _convert_document_to_object(cls, document):
        # validation errors of the job graph are raised as they are
        from ..workflow.workflow import Job, Workflow
        _jobs = document['jobs'] or []
        if not isinstance(_jobs, list):
            raise DReprError("'jobs' must be a list")
        _parsed = []
        for _job in _jobs:
            if not isinstance(_job, dict):
                raise DReprError("Each job must be a mapping, got {!r}".format(_job))
            _unknown = sorted(set(_job) - set(_JOB_KEYWORDS))
            if _unknown:
                raise DReprError("Job {!r} has unknown key(s): {}".format(_job.get('name'), _unknown))
            if 'name' not in _job or 'kind' not in _job:
                raise DReprError("Each job needs a 'name' and a 'kind': {!r}".format(_job))
            _parsed.append(Job(**_job))
        return Workflow(name=document['name'], jobs=_parsed)


WorkflowYamlWriter._register_class(_AVAILABLE_REPRESENTATIONS)
WorkflowYamlReader._register_class(_AVAILABLE_REPRESENTATIONS)
