"""
Workflow definitions: named jobs with dependencies forming a DAG.

A workflow is written in YAML::

    name: pipeline
    jobs:
      - {name: fetch, kind: local, command: "./fetch.sh"}
      - {name: train, kind: remote-sim, command: "./train.sh", depends_on: [fetch], workdir: model}
      - {name: report, kind: noop, depends_on: [train]}
"""

import logging

from collections import deque, namedtuple

import six

from ..tools import is_token

__all__ = ['Job', 'Workflow', 'parse_workflow', 'load_workflow', 'JOB_KINDS', 'LOCAL', 'REMOTE_SIM', 'NOOP',
           'WorkflowError', 'WorkflowSyntaxError', 'DuplicateJobError', 'UnknownDependencyError',
           'WorkflowCycleError', 'ExecutorMissingError', 'UnknownRunError']

logger = logging.getLogger(__name__)

LOCAL = 'local'
REMOTE_SIM = 'remote-sim'
NOOP = 'noop'
JOB_KINDS = (LOCAL, REMOTE_SIM, NOOP)


class WorkflowError(Exception):
    pass


class WorkflowSyntaxError(WorkflowError):
    pass


class DuplicateJobError(WorkflowError):
    pass


class UnknownDependencyError(WorkflowError):
    pass


class WorkflowCycleError(WorkflowError):
    pass


class ExecutorMissingError(WorkflowError):
    pass


class UnknownRunError(WorkflowError):
    pass


class Job(namedtuple('Job', ('name', 'kind', 'command', 'depends_on', 'env', 'workdir'))):
    __slots__ = ()

    def __new__(cls, name, kind, command=None, depends_on=(), env=None, workdir=None):
        if not is_token(name):
            raise WorkflowSyntaxError("Invalid job name {!r}".format(name))
        if kind not in JOB_KINDS:
            raise WorkflowSyntaxError("Job '{}' has unknown kind '{}'! Expected one of {}.".format(name, kind, JOB_KINDS))
        if kind == NOOP and command is not None:
            raise WorkflowSyntaxError("Job '{}' of kind 'noop' must not have a command".format(name))
        if kind != NOOP and not (isinstance(command, six.string_types) and command.strip()):
            raise WorkflowSyntaxError("Job '{}' of kind '{}' needs a command".format(name, kind))
        if isinstance(depends_on, six.string_types):
            depends_on = [depends_on]
        if depends_on is None:
            depends_on = ()
        if not (isinstance(depends_on, (list, tuple)) and all(isinstance(_d, six.string_types) for _d in depends_on)):
            raise WorkflowSyntaxError("Job '{}': depends_on must be a job name or a list of job names, got {!r}".format(
                name, depends_on))
        if env is not None:
            if not isinstance(env, dict):
                raise WorkflowSyntaxError("Job '{}': env must be a mapping".format(name))
            env = dict((str(_k), str(_v)) for _k, _v in six.iteritems(env))
        return super(Job, cls).__new__(cls, name, kind, command, tuple(depends_on), env, workdir)

    def to_document(self):
        _doc = dict(name=self.name, kind=self.kind)
        if self.command is not None:
            _doc['command'] = self.command
        if self.depends_on:
            _doc['depends_on'] = list(self.depends_on)
        if self.env:
            _doc['env'] = dict(self.env)
        if self.workdir is not None:
            _doc['workdir'] = self.workdir
        return _doc


class Workflow(object):
    """
    A validated job DAG.

    :raise DuplicateJobError: if two jobs share a name
    :raise UnknownDependencyError: if a job depends on a job not in the workflow
    :raise WorkflowCycleError: if the dependencies form a cycle
    """

    def __init__(self, name, jobs=()):
        if not is_token(name):
            raise WorkflowSyntaxError("Invalid workflow name {!r}".format(name))
        self._name = name
        self._jobs = tuple(jobs)
        self._by_name = dict()
        for _job in self._jobs:
            if _job.name in self._by_name:
                raise DuplicateJobError("Duplicate job name '{}' in workflow '{}'".format(_job.name, name))
            self._by_name[_job.name] = _job
        for _job in self._jobs:
            for _dependency in _job.depends_on:
                if _dependency not in self._by_name:
                    raise UnknownDependencyError("Job '{}' depends on unknown job '{}'".format(_job.name, _dependency))
        self._order = self._topological_order()

    def _topological_order(self):
        _indegree = dict((_j.name, len(set(_j.depends_on))) for _j in self._jobs)
        _queue = deque(_j.name for _j in self._jobs if _indegree[_j.name] == 0)
        _order = []
        while _queue:
            _name = _queue.popleft()
            _order.append(_name)
            for _child in self.dependents(_name):
                _indegree[_child] -= 1
                if _indegree[_child] == 0:
                    _queue.append(_child)
        if len(_order) != len(self._jobs):
            _cyclic = sorted(_n for _n, _d in six.iteritems(_indegree) if _d > 0)
            raise WorkflowCycleError("Workflow '{}' contains a dependency cycle through: {}".format(
                self._name, ', '.join(_cyclic)))
        return tuple(_order)

    def __len__(self):
        return len(self._jobs)

    def __repr__(self):
        return "{}(name={!r}, jobs={})".format(self.__class__.__name__, self._name, len(self._jobs))

    @property
    def name(self):
        return self._name

    @property
    def jobs(self):
        return self._jobs

    @property
    def edges(self):
        """dependency pairs ``(u, v)``: v depends on u"""
        return tuple((_d, _j.name) for _j in self._jobs for _d in _j.depends_on)

    @property
    def topological_order(self):
        return self._order

    def job(self, name):
        return self._by_name[name]

    def dependents(self, name):
        return [_j.name for _j in self._jobs if name in _j.depends_on]

    def descendants(self, name):
        _seen = set()
        _stack = [name]
        while _stack:
            for _child in self.dependents(_stack.pop()):
                if _child not in _seen:
                    _seen.add(_child)
                    _stack.append(_child)
        return _seen

    def to_document(self):
        return dict(name=self._name, jobs=[_j.to_document() for _j in self._jobs])


def parse_workflow(text):
    """
    Parse a YAML workflow definition.

    :rtype: :py:class:`Workflow`
    :raise WorkflowSyntaxError: if the text is no valid workflow document
    """
    from ..representation import get_reader, DReprError
    try:
        _workflow = get_reader('workflow', 'yaml').from_text(text)
    except DReprError as _e:
        raise WorkflowSyntaxError(str(_e))
    logger.debug("Parsed workflow '%s' with %d job(s)", _workflow.name, len(_workflow))
    return _workflow


def load_workflow(filename):
    with open(filename) as _f:
        return parse_workflow(_f.read())
