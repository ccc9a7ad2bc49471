"""
Per-run job state bookkeeping.

Job states move along ``undefined -> ready -> submitted -> running`` and end in one of the
terminal states ``done``, ``failed`` or ``killed``. A terminal state may also be entered
directly from any earlier state (dependents of a failed job fail without being submitted,
cancelled jobs are killed before they start). Terminal states absorb.
"""

import logging
import threading
import time

from collections import namedtuple

from ..io import JsonLinesFileHandle
from ..tools import new_uuid

__all__ = ['JobState', 'RunHandle', 'JOB_STATES', 'TERMINAL_STATES',
           'UNDEFINED', 'READY', 'SUBMITTED', 'RUNNING', 'DONE', 'FAILED', 'KILLED']

logger = logging.getLogger(__name__)

UNDEFINED = 'undefined'
READY = 'ready'
SUBMITTED = 'submitted'
RUNNING = 'running'
DONE = 'done'
FAILED = 'failed'
KILLED = 'killed'

JOB_STATES = (UNDEFINED, READY, SUBMITTED, RUNNING, DONE, FAILED, KILLED)
TERMINAL_STATES = (DONE, FAILED, KILLED)
_PROGRESSION = (UNDEFINED, READY, SUBMITTED, RUNNING)


class JobState(namedtuple('JobState', ('value', 'updated_at'))):
    __slots__ = ()

    @property
    def terminal(self):
        return self.value in TERMINAL_STATES


def _transition_allowed(old, new):
    if old in TERMINAL_STATES:
        return False
    if new in TERMINAL_STATES:
        return True
    return _PROGRESSION.index(new) == _PROGRESSION.index(old) + 1


class RunHandle(object):
    """
    Observable state of one workflow run.

    All state changes go through :py:meth:`transition` under the handle's condition variable,
    so :py:meth:`status` always returns a snapshot taken at one instant.
    """

    def __init__(self, workflow, run_id=None, event_log=None, clock=time.time):
        self._workflow = workflow
        self._run_id = run_id or new_uuid()
        self._clock = clock
        self._event_log_file = event_log
        self.condition = threading.Condition()
        self._events = []
        self._states = dict((_j.name, JobState(UNDEFINED, self._clock())) for _j in workflow.jobs)
        self._cancelled = False
        self._finished = threading.Event()
        with self.condition:
            for _job in workflow.jobs:
                self.transition(_job.name, READY)
        if not workflow.jobs:
            self._finished.set()

    def __repr__(self):
        return "{}(run_id={!r}, workflow={!r})".format(self.__class__.__name__, self._run_id, self._workflow.name)

    @property
    def run_id(self):
        return self._run_id

    @property
    def workflow(self):
        return self._workflow

    @property
    def cancelled(self):
        return self._cancelled

    @property
    def finished(self):
        return self._finished.is_set()

    def state(self, job_name):
        return self._states[job_name].value

    def transition(self, job_name, new_state):
        """
        Move a job to `new_state` and log the event. Must be called with :py:attr:`condition` held.
        Returns ``False`` (and changes nothing) for a transition the state machine forbids.
        """
        _old = self._states[job_name].value
        if not _transition_allowed(_old, new_state):
            return False
        _now = self._clock()
        self._states[job_name] = JobState(new_state, _now)
        _event = dict(run_id=self._run_id, job=job_name, event=new_state, ts=_now)
        self._events.append(_event)
        if self._event_log_file is not None:
            JsonLinesFileHandle(self._event_log_file).append(_event)
        logger.debug("run %s: job '%s' %s -> %s", self._run_id, job_name, _old, new_state)
        if all(_s.terminal for _s in self._states.values()):
            self._finished.set()
        self.condition.notify_all()
        return True

    def mark_cancelled(self):
        self._cancelled = True

    def events(self):
        """the event log of this run, in order"""
        with self.condition:
            return [dict(_e) for _e in self._events]

    def _progress(self):
        if not self._states:
            return 1.0
        return sum(1 for _s in self._states.values() if _s.value == DONE) / float(len(self._states))

    @property
    def progress(self):
        with self.condition:
            return self._progress()

    def status(self):
        """consistent snapshot: per-job states, queue contents and progress"""
        with self.condition:
            return dict(
                run_id=self._run_id,
                workflow=self._workflow.name,
                states=dict((_n, _s.value) for _n, _s in self._states.items()),
                queue=sorted(_n for _n, _s in self._states.items() if _s.value == SUBMITTED),
                progress=self._progress(),
                finished=self._finished.is_set(),
                cancelled=self._cancelled,
            )

    def wait(self, timeout=None):
        """block until every job reached a terminal state; returns whether it did"""
        return self._finished.wait(timeout)
