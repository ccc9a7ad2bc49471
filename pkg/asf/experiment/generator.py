"""
Generation of ready-to-run experiment directories and their submission as a workflow.
"""

import json
import logging
import os
import shutil
import stat
import string

from collections import namedtuple

import six

from ..config import kc
from .config import Assignment, expand, render_value, ExperimentError, UnresolvedPlaceholderError, OutputExistsError

__all__ = ['GeneratedRun', 'GeneratedRunSet', 'substitute', 'placeholders', 'generate', 'load_runset', 'submit']

logger = logging.getLogger(__name__)

_FORMATTER = string.Formatter()
_EXECUTABLE = stat.S_IRWXU | stat.S_IRGRP | stat.S_IXGRP | stat.S_IROTH | stat.S_IXOTH


class GeneratedRun(namedtuple('GeneratedRun', ('assignment', 'script', 'manifest'))):
    __slots__ = ()

    @property
    def slug(self):
        return self.assignment.slug


class GeneratedRunSet(object):
    """The output of :py:func:`generate`: one directory per assignment under `root`."""

    def __init__(self, name, root, runs=(), index=None):
        self._name = name
        self._root = root
        self._runs = tuple(runs)
        self._index = index

    def __len__(self):
        return len(self._runs)

    def __iter__(self):
        return iter(self._runs)

    @property
    def name(self):
        return self._name

    @property
    def root(self):
        return self._root

    @property
    def runs(self):
        return self._runs

    @property
    def index(self):
        return self._index

    @property
    def slugs(self):
        return [_r.slug for _r in self._runs]

    def to_document(self):
        return dict(name=self._name, root=self._root, index=self._index,
                    runs=[dict(slug=_r.slug, script=_r.script, manifest=_r.manifest) for _r in self._runs])


def placeholders(template):
    """names of the ``{name}`` placeholders of a template, in order of appearance"""
    _names = []
    try:
        for _literal, _field, _format_spec, _conversion in _FORMATTER.parse(template):
            if _field is None:
                continue
            if not _field or _format_spec or _conversion or not _field.isidentifier():
                raise UnresolvedPlaceholderError("Unsupported placeholder '{{{}}}'".format(_field))
            if _field not in _names:
                _names.append(_field)
    except ValueError as _e:
        raise UnresolvedPlaceholderError("Malformed template: {}".format(_e))
    return _names


def substitute(template, assignment):
    """
    Replace every ``{name}`` placeholder by the textual form of its assignment value.
    ``{{`` and ``}}`` render literal braces.

    :param assignment: :py:class:`~asf.experiment.config.Assignment` or mapping
    :raise UnresolvedPlaceholderError: if a placeholder has no value
    """
    _values = assignment.values if isinstance(assignment, Assignment) else assignment
    _names = placeholders(template)
    _missing = [_n for _n in _names if _n not in _values]
    if _missing:
        raise UnresolvedPlaceholderError("No value for placeholder(s): {}".format(', '.join(_missing)))
    _unused = sorted(set(_values) - set(_names))
    if _unused:
        logger.warning("Assignment key(s) not used by the template: %s", ', '.join(_unused))
    return _FORMATTER.vformat(template, (), dict((_n, render_value(_values[_n])) for _n in _names))


def _write(filename, content):
    with open(filename, 'w') as _f:
        _f.write(content)


def generate(config, template, outdir, force=False):
    """
    Write one directory per assignment containing the substituted script and a JSON manifest
    of the assignment, plus an index file of all slugs.

    :param force: replace an existing output directory
    :rtype: :py:class:`GeneratedRunSet`
    :raise OutputExistsError: if `outdir` exists and `force` is not set
    """
    if os.path.exists(outdir):
        if not force:
            raise OutputExistsError("Output directory '{}' exists (use force to replace it)".format(outdir))
        shutil.rmtree(outdir)
    _assignments = expand(config)
    _slugs = [_a.slug for _a in _assignments]
    assert len(set(_slugs)) == len(_slugs), "Slug collision in the expansion of '{}'".format(config.name)
    _scripts = [substitute(template, _a) for _a in _assignments]

    _script_name = kc('experiment', 'script_name')
    _manifest_name = kc('experiment', 'manifest_name')
    os.makedirs(outdir)
    _runs = []
    for _assignment, _script in zip(_assignments, _scripts):
        _directory = os.path.join(outdir, _assignment.slug)
        os.mkdir(_directory)
        _script_path = os.path.join(_directory, _script_name)
        _manifest_path = os.path.join(_directory, _manifest_name)
        _write(_script_path, _script)
        os.chmod(_script_path, _EXECUTABLE)
        _write(_manifest_path, json.dumps(_assignment.to_document(), indent=2, sort_keys=True) + '\n')
        _runs.append(GeneratedRun(_assignment, _script_path, _manifest_path))
    _index = os.path.join(outdir, kc('experiment', 'index_name'))
    _write(_index, ''.join(_s + '\n' for _s in _slugs))
    logger.info("Generated %d experiment(s) of '%s' in %s", len(_runs), config.name, outdir)
    return GeneratedRunSet(config.name, outdir, _runs, _index)


def load_runset(outdir, name=None):
    """
    Re-open a generated output directory from its index file.

    :param name: name of the run set; the directory's base name if omitted
    :raise ExperimentError: if the directory holds no generated experiments
    """
    _index = os.path.join(outdir, kc('experiment', 'index_name'))
    if not os.path.isfile(_index):
        raise ExperimentError("No experiment index in '{}'".format(outdir))
    with open(_index) as _f:
        _slugs = [_line.strip() for _line in _f if _line.strip()]
    _runs = []
    for _slug in _slugs:
        _directory = os.path.join(outdir, _slug)
        _manifest_path = os.path.join(_directory, kc('experiment', 'manifest_name'))
        try:
            with open(_manifest_path) as _f:
                _values = json.load(_f)
        except (IOError, OSError, ValueError) as _e:
            raise ExperimentError("Cannot read manifest of experiment '{}': {}".format(_slug, _e))
        _runs.append(GeneratedRun(Assignment(sorted(_values.items()), (), slug=_slug),
                                  os.path.join(_directory, kc('experiment', 'script_name')), _manifest_path))
    _name = name or os.path.basename(os.path.abspath(outdir))
    return GeneratedRunSet(_name, outdir, _runs, _index)


def submit(runset):
    """
    Build a workflow with one independent ``local`` job per generated experiment, running its
    script inside the experiment directory. Execute it with :py:func:`asf.workflow.run`.

    :rtype: :py:class:`~asf.workflow.Workflow`
    """
    from ..workflow import Job, Workflow
    _jobs = [Job(name=_r.slug, kind='local', command=six.moves.shlex_quote(os.path.abspath(_r.script)),
                 workdir=os.path.dirname(os.path.abspath(_r.script)))
             for _r in runset]
    return Workflow(name=runset.name, jobs=_jobs)
