import json
import os
import random
import unittest

from asf.workflow import (Job, Workflow, run, prepare, WorkflowManager, ExecutorMissingError, UnknownRunError,
                          NoopExecutor, LocalExecutor, NOOP, LOCAL, DONE, FAILED, KILLED, READY, RUNNING)
from asf.test.tools import RecordingExecutor, BlockingExecutor, TempDirTestMixin

_TIMEOUT = 30


def _random_workflow(rng, max_jobs=20):
    _count = rng.randint(1, max_jobs)
    _names = ['j{:02d}'.format(_i) for _i in range(_count)]
    _jobs = []
    for _i, _name in enumerate(_names):
        _parents = [_p for _p in _names[:_i] if rng.random() < 0.25]
        _jobs.append(Job(_name, NOOP, depends_on=_parents))
    # definition order is independent of dependency order
    rng.shuffle(_jobs)
    return Workflow('random', _jobs)


def _event_index(events, job, state):
    for _i, _event in enumerate(events):
        if _event['job'] == job and _event['event'] == state:
            return _i
    return None


class TestRunner(unittest.TestCase):

    def test_dependencies_respected(self):
        _rng = random.Random(2021)
        for _ in range(100):
            _workflow = _random_workflow(_rng)
            _run = run(_workflow, executors={NOOP: RecordingExecutor()}, max_parallel=4)
            self.assertTrue(_run.wait(_TIMEOUT))
            _events = _run.events()
            for _u, _v in _workflow.edges:
                self.assertLess(_event_index(_events, _u, DONE), _event_index(_events, _v, RUNNING))
            self.assertEqual(set(_run.status()['states'].values()), {DONE})
            self.assertEqual(_run.progress, 1.0)

    def test_failure_fails_descendants_only(self):
        _rng = random.Random(7)
        for _ in range(100):
            _workflow = _random_workflow(_rng)
            _failing = _rng.choice(_workflow.jobs).name
            _recorder = RecordingExecutor(failing=[_failing])
            _run = run(_workflow, executors={NOOP: _recorder}, max_parallel=3)
            self.assertTrue(_run.wait(_TIMEOUT))
            _expected_failed = {_failing} | _workflow.descendants(_failing)
            _states = _run.status()['states']
            self.assertEqual(set(_n for _n, _s in _states.items() if _s == FAILED), _expected_failed)
            self.assertEqual(set(_n for _n, _s in _states.items() if _s == DONE),
                             set(_j.name for _j in _workflow.jobs) - _expected_failed)
            # descendants of a failed job are never started
            self.assertFalse(set(_recorder.executed) & _workflow.descendants(_failing))

    def test_max_parallel(self):
        _workflow = Workflow('wide', [Job('j{}'.format(_i), NOOP) for _i in range(12)])
        _recorder = RecordingExecutor(delay=0.05)
        _run = run(_workflow, executors={NOOP: _recorder}, max_parallel=3)
        self.assertTrue(_run.wait(_TIMEOUT))
        self.assertLessEqual(_recorder.peak, 3)
        self.assertEqual(len(_recorder.executed), 12)

    def test_state_sequence(self):
        _run = run(Workflow('single', [Job('only', NOOP)]), executors={NOOP: NoopExecutor()}, max_parallel=1)
        self.assertTrue(_run.wait(_TIMEOUT))
        self.assertEqual([_e['event'] for _e in _run.events()], ['ready', 'submitted', 'running', 'done'])

    def test_cancel_kills_running_and_waiting_jobs(self):
        _blocking = BlockingExecutor()
        _workflow = Workflow('blocked', [Job('first', NOOP), Job('second', NOOP, depends_on=['first'])])
        _run = run(_workflow, executors={NOOP: _blocking}, max_parallel=2)
        self.assertTrue(_blocking.started.wait(_TIMEOUT))
        _ack = _run.cancel()
        self.assertTrue(_ack['cancelled'])
        self.assertTrue(_run.wait(_TIMEOUT))
        self.assertEqual(_run.status()['states'], {'first': KILLED, 'second': KILLED})
        self.assertTrue(_run.status()['cancelled'])
        self.assertFalse(_run.cancel()['cancelled'])

    def test_missing_executor(self):
        with self.assertRaises(ExecutorMissingError):
            run(Workflow('local', [Job('a', LOCAL, command='true')]), executors={NOOP: NoopExecutor()})

    def test_invalid_max_parallel(self):
        with self.assertRaises(ValueError):
            prepare(Workflow('w', [Job('a', NOOP)]), executors={NOOP: NoopExecutor()}, max_parallel=0)

    def test_prepared_run_is_ready(self):
        _run = prepare(Workflow('w', [Job('a', NOOP)]), executors={NOOP: NoopExecutor()}, max_parallel=1)
        self.assertEqual(_run.state('a'), READY)
        self.assertFalse(_run.finished)
        _run.start()
        with self.assertRaises(RuntimeError):
            _run.start()
        self.assertTrue(_run.wait(_TIMEOUT))

    def test_empty_workflow_is_finished(self):
        _run = run(Workflow('empty'), executors={}, max_parallel=1)
        self.assertTrue(_run.wait(_TIMEOUT))
        self.assertEqual(_run.progress, 1.0)


class TestLocalExecution(TempDirTestMixin, unittest.TestCase):

    def test_local_jobs_and_event_log(self):
        _log = os.path.join(self._tmp_dir, 'events.jsonl')
        _out = os.path.join(self._tmp_dir, 'out.txt')
        _workflow = Workflow('shell', [
            Job('write', LOCAL, command='echo $GREETING > out.txt', env=dict(GREETING='hello'), workdir=self._tmp_dir),
            Job('check', LOCAL, command='grep -q hello out.txt', depends_on=['write'], workdir=self._tmp_dir),
            Job('broken', LOCAL, command='exit 3', depends_on=['check']),
        ])
        _run = run(_workflow, executors={LOCAL: LocalExecutor()}, max_parallel=2, event_log=_log)
        self.assertTrue(_run.wait(_TIMEOUT))
        self.assertEqual(_run.status()['states'], dict(write=DONE, check=DONE, broken=FAILED))
        with open(_out) as _f:
            self.assertEqual(_f.read().strip(), 'hello')
        with open(_log) as _f:
            _logged = [json.loads(_line) for _line in _f]
        self.assertEqual(_logged, _run.events())


class TestWorkflowManager(unittest.TestCase):

    def setUp(self):
        self._manager = WorkflowManager(executors={NOOP: NoopExecutor()}, max_parallel=2)

    def test_submit_and_status(self):
        _run = self._manager.submit(Workflow('w', [Job('a', NOOP), Job('b', NOOP, depends_on=['a'])]))
        self.assertTrue(_run.wait(_TIMEOUT))
        _status = self._manager.status(_run.run_id)
        self.assertEqual(_status['states'], dict(a=DONE, b=DONE))
        self.assertTrue(_status['finished'])
        self.assertEqual(list(self._manager.runs()), [_run.run_id])

    def test_unknown_run(self):
        with self.assertRaises(UnknownRunError):
            self._manager.status('no-such-run')
        with self.assertRaises(UnknownRunError):
            self._manager.cancel('no-such-run')
