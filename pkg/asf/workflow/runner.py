"""
Workflow execution.

:py:func:`run` starts a background scheduler that submits a job as soon as all its
dependencies are done, keeps at most ``max_parallel`` jobs in flight and fails the descendants
of a failed job without starting them.
"""

import logging
import threading

from concurrent.futures import ThreadPoolExecutor

import six

from ..config import kc
from .executors import ExecutionContext, default_executors
from .state import RunHandle, READY, SUBMITTED, RUNNING, DONE, FAILED, KILLED
from .workflow import ExecutorMissingError, UnknownRunError

__all__ = ['run', 'prepare', 'status', 'cancel', 'WorkflowRun', 'WorkflowManager']

logger = logging.getLogger(__name__)


class WorkflowRun(RunHandle):
    """A run handle that also drives the execution of its workflow."""

    def __init__(self, workflow, executors=None, max_parallel=None, event_log=None, run_id=None):
        _executors = executors if executors is not None else default_executors()
        _missing = sorted(set(_j.kind for _j in workflow.jobs) - set(_executors))
        if _missing:
            raise ExecutorMissingError("No executor registered for job kind(s): {}".format(', '.join(_missing)))
        _max_parallel = max_parallel if max_parallel is not None else kc('workflow', 'max_parallel')
        if _max_parallel < 1:
            raise ValueError("max_parallel must be at least 1, got {}".format(_max_parallel))
        if event_log is None:
            event_log = kc('workflow', 'event_log')
        super(WorkflowRun, self).__init__(workflow, run_id=run_id, event_log=event_log)
        self._executors = dict(_executors)
        self._max_parallel = int(_max_parallel)
        self._cancel_event = threading.Event()
        self._in_flight = 0
        self._dispatcher = None

    @property
    def max_parallel(self):
        return self._max_parallel

    def start(self):
        if self._dispatcher is not None:
            raise RuntimeError("Run {} already started".format(self.run_id))
        self._dispatcher = threading.Thread(target=self._dispatch, name='asf-run-{}'.format(self.run_id[:8]))
        self._dispatcher.daemon = True
        self._dispatcher.start()
        logger.info("Started run %s of workflow '%s'", self.run_id, self.workflow.name)
        return self

    def _propagate_failures(self):
        # topological order lets a failure reach all descendants in one pass
        for _name in self.workflow.topological_order:
            if self.state(_name) != READY:
                continue
            if any(self.state(_d) in (FAILED, KILLED) for _d in self.workflow.job(_name).depends_on):
                self.transition(_name, FAILED)

    def _runnable(self):
        return [_n for _n in self.workflow.topological_order
                if self.state(_n) == READY
                and all(self.state(_d) == DONE for _d in self.workflow.job(_n).depends_on)]

    def _dispatch(self):
        with ThreadPoolExecutor(max_workers=self._max_parallel) as _pool:
            with self.condition:
                while not self.finished:
                    if self.cancelled:
                        for _job in self.workflow.jobs:
                            if self.state(_job.name) in (READY, SUBMITTED):
                                self.transition(_job.name, KILLED)
                    else:
                        self._propagate_failures()
                        for _name in self._runnable()[:self._max_parallel - self._in_flight]:
                            self.transition(_name, SUBMITTED)
                            self._in_flight += 1
                            _pool.submit(self._execute, self.workflow.job(_name))
                    if not self.finished:
                        self.condition.wait()
        logger.info("Finished run %s of workflow '%s'", self.run_id, self.workflow.name)

    def _execute(self, job):
        try:
            with self.condition:
                if self.cancelled or not self.transition(job.name, RUNNING):
                    self.transition(job.name, KILLED)
                    return
            try:
                _ok = self._executors[job.kind].execute(job, ExecutionContext(self.run_id, self._cancel_event))
            except Exception as _e:
                logger.warning("Job '%s' raised: %s", job.name, _e)
                _ok = False
            with self.condition:
                if self.cancelled:
                    self.transition(job.name, KILLED)
                else:
                    self.transition(job.name, DONE if _ok else FAILED)
        finally:
            with self.condition:
                self._in_flight -= 1
                self.condition.notify_all()

    def cancel(self):
        """
        Kill unstarted jobs and signal running ones. Idempotent; a finished run is left as it is.

        :return: acknowledgement document
        """
        with self.condition:
            if self.finished:
                return dict(run_id=self.run_id, cancelled=False, finished=True)
            self.mark_cancelled()
            self._cancel_event.set()
            for _job in self.workflow.jobs:
                if self.state(_job.name) in (READY, SUBMITTED):
                    self.transition(_job.name, KILLED)
            self.condition.notify_all()
        logger.info("Cancelled run %s", self.run_id)
        return dict(run_id=self.run_id, cancelled=True, finished=self.finished)


def prepare(workflow, executors=None, max_parallel=None, event_log=None):
    """create the run handle (all jobs ready) without starting it"""
    return WorkflowRun(workflow, executors=executors, max_parallel=max_parallel, event_log=event_log)


def run(workflow, executors=None, max_parallel=None, event_log=None):
    """
    Execute a workflow in the background.

    :param executors: mapping job kind -> :py:class:`~asf.workflow.executors.Executor`
    :param max_parallel: upper bound of concurrently running jobs (``workflow.max_parallel``)
    :param event_log: file receiving the event log as newline-delimited JSON
    :rtype: :py:class:`WorkflowRun`
    :raise ExecutorMissingError: if a job kind has no executor
    """
    return prepare(workflow, executors=executors, max_parallel=max_parallel, event_log=event_log).start()


def status(handle):
    return handle.status()


def cancel(handle):
    return handle.cancel()


class WorkflowManager(object):
    """Keeps the runs started by a service, addressable by run id."""

    def __init__(self, executors=None, max_parallel=None, event_log=None):
        self._executors = executors
        self._max_parallel = max_parallel
        self._event_log = event_log
        self._runs = dict()
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._runs)

    def submit(self, workflow):
        _run = prepare(workflow, executors=self._executors, max_parallel=self._max_parallel,
                       event_log=self._event_log)
        with self._lock:
            self._runs[_run.run_id] = _run
        return _run.start()

    def get(self, run_id):
        with self._lock:
            try:
                return self._runs[run_id]
            except KeyError:
                raise UnknownRunError("Unknown run id '{}'".format(run_id))

    def status(self, run_id):
        return self.get(run_id).status()

    def cancel(self, run_id):
        return self.get(run_id).cancel()

    def runs(self):
        with self._lock:
            return dict((_id, _r.status()) for _id, _r in six.iteritems(self._runs))
