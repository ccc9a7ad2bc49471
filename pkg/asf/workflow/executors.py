"""
Executors carry out the jobs of one kind.

An executor's :py:meth:`~Executor.execute` returns ``True`` on success and ``False`` (or
raises) on failure. It receives an :py:class:`ExecutionContext` whose ``cancel_event`` is set
when the run is cancelled; long-running executors watch it and stop their job.
"""

import abc
import logging
import os
import shutil
import subprocess
import tempfile

from collections import namedtuple

import six

from ..config import kc
from .workflow import LOCAL, REMOTE_SIM, NOOP

__all__ = ['Executor', 'ExecutionContext', 'LocalExecutor', 'RemoteSimExecutor', 'NoopExecutor',
           'default_executors']

logger = logging.getLogger(__name__)

_POLL_INTERVAL = 0.05


class ExecutionContext(namedtuple('ExecutionContext', ('run_id', 'cancel_event'))):
    __slots__ = ()


@six.add_metaclass(abc.ABCMeta)
class Executor(object):

    @abc.abstractmethod
    def execute(self, job, context):
        pass


class NoopExecutor(Executor):
    """succeeds immediately"""

    def execute(self, job, context):
        return True


class LocalExecutor(Executor):
    """Runs the job command through the shell, in the job's working directory."""

    def _run(self, command, cwd, env, context, job_name):
        _env = dict(os.environ)
        _env.update(env or {})
        _process = subprocess.Popen(command, shell=True, cwd=cwd, env=_env,
                                    stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
        _output = b''
        while True:
            try:
                _output, _ = _process.communicate(timeout=_POLL_INTERVAL)
                break
            except subprocess.TimeoutExpired:
                if context.cancel_event.is_set():
                    logger.info("Terminating job '%s'", job_name)
                    _process.terminate()
                    _output, _ = _process.communicate()
                    break
        if _output:
            logger.debug("output of job '%s':\n%s", job_name, _output.decode('utf-8', 'replace'))
        if _process.returncode != 0:
            logger.warning("Job '%s' exited with status %s", job_name, _process.returncode)
        return _process.returncode == 0

    def execute(self, job, context):
        return self._run(job.command, job.workdir, job.env, context, job.name)


class RemoteSimExecutor(LocalExecutor):
    """
    Simulates a remote host: the job's working directory is staged into a scratch directory,
    the command runs there and the scratch copy is deleted afterwards.
    """

    def __init__(self, scratch_root=None):
        self._scratch_root = scratch_root if scratch_root is not None else kc('workflow', 'scratch_dir')

    def execute(self, job, context):
        from ..staging import stage
        _scratch = tempfile.mkdtemp(prefix='asf-remote-{}-'.format(job.name), dir=self._scratch_root)
        try:
            _workdir = os.path.join(_scratch, 'work')
            if job.workdir is not None:
                _manifest = stage(job.workdir, _workdir)
                logger.info("Staged %d file(s) for job '%s'", _manifest.count, job.name)
            else:
                os.mkdir(_workdir)
            return self._run(job.command, _workdir, job.env, context, job.name)
        finally:
            shutil.rmtree(_scratch, ignore_errors=True)


def default_executors():
    """executor registry covering all job kinds"""
    return {LOCAL: LocalExecutor(), REMOTE_SIM: RemoteSimExecutor(), NOOP: NoopExecutor()}
