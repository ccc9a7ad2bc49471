"""
Experiment configurations and their expansion into assignments.

A configuration carries one-to-one ``parameters`` and an ordered ``experiments`` mapping whose
value lists are permuted::

    name: eq-sweep
    parameters:
      data: /scratch/eq
    experiments:
      epochs: [2, 30, 70]
      lr: [0.001, 0.01]
"""

import itertools
import logging
import re

from collections import OrderedDict

import six

from ..tools import is_token

__all__ = ['ExperimentConfig', 'Assignment', 'expand', 'render_value', 'load_experiment_config',
           'ExperimentError', 'ExperimentConfigError', 'UnresolvedPlaceholderError', 'OutputExistsError']

logger = logging.getLogger(__name__)

_UNSAFE_SLUG_CHARACTERS = re.compile(r'[^A-Za-z0-9._]')


class ExperimentError(Exception):
    pass


class ExperimentConfigError(ExperimentError):
    pass


class UnresolvedPlaceholderError(ExperimentError):
    pass


class OutputExistsError(ExperimentError):
    pass


def render_value(value):
    """
    Textual form of a scalar: integers without decimal point, floats as their shortest
    round-trip representation, strings verbatim.
    """
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, six.integer_types):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ''
    return six.text_type(value)


def _slug_fragment(key, value):
    return _UNSAFE_SLUG_CHARACTERS.sub('_', "{}_{}".format(key, render_value(value)))


def _is_scalar(value):
    return value is None or isinstance(value, (six.string_types, six.integer_types, float, bool))


class ExperimentConfig(object):
    """
    :param name: configuration name
    :param parameters: mapping name -> scalar
    :param experiments: ordered mapping (or list of pairs) name -> nonempty list of scalars
    :raise ExperimentConfigError: on key collisions, empty lists, non-scalar values or values
        that would share an experiment directory
    """

    def __init__(self, name, parameters=None, experiments=None):
        if not is_token(name):
            raise ExperimentConfigError("Invalid experiment name {!r}".format(name))
        self._name = name
        self._parameters = OrderedDict(parameters or ())
        self._experiments = OrderedDict(experiments or ())
        for _key, _value in six.iteritems(self._parameters):
            if not _is_scalar(_value):
                raise ExperimentConfigError("Parameter '{}' must be a scalar, got {!r}".format(_key, _value))
        for _key, _values in six.iteritems(self._experiments):
            if not is_token(_key):
                raise ExperimentConfigError("Invalid experiment key {!r}".format(_key))
            if not isinstance(_values, (list, tuple)):
                raise ExperimentConfigError("Experiment values of '{}' must be a list, got {!r}".format(_key, _values))
            if not _values:
                raise ExperimentConfigError("Experiment '{}' has an empty value list".format(_key))
            for _value in _values:
                if not _is_scalar(_value):
                    raise ExperimentConfigError("Experiment '{}' has a non-scalar value {!r}".format(_key, _value))
            if len(set(render_value(_v) for _v in _values)) != len(_values):
                raise ExperimentConfigError("Experiment '{}' lists a value twice".format(_key))
            # fragments hold no '-', so distinct fragments per key keep whole slugs distinct
            _fragments = set(_slug_fragment(_key, _v) for _v in _values)
            if len(_fragments) != len(_values):
                raise ExperimentConfigError(
                    "Values of experiment '{}' differ only in characters replaced in directory names: {!r}".format(
                        _key, list(_values)))
        _collisions = sorted(set(self._parameters) & set(self._experiments))
        if _collisions:
            raise ExperimentConfigError("Key(s) both in parameters and experiments: {}".format(', '.join(_collisions)))
        self._experiments = OrderedDict((_k, tuple(_v)) for _k, _v in six.iteritems(self._experiments))

    def __repr__(self):
        return "{}(name={!r}, parameters={}, experiments={})".format(
            self.__class__.__name__, self._name, list(self._parameters), list(self._experiments))

    @property
    def name(self):
        return self._name

    @property
    def parameters(self):
        return OrderedDict(self._parameters)

    @property
    def experiments(self):
        return OrderedDict(self._experiments)

    @property
    def size(self):
        """number of assignments of the expansion"""
        _size = 1
        for _values in self._experiments.values():
            _size *= len(_values)
        return _size

    def to_document(self):
        return OrderedDict([('name', self._name),
                            ('parameters', dict(self._parameters)),
                            ('experiments', OrderedDict((_k, list(_v)) for _k, _v in six.iteritems(self._experiments)))])


class Assignment(object):
    """One concrete permutation: all one-to-one parameters plus one value per experiments key."""

    def __init__(self, values, experiment_keys, name=None, slug=None):
        self._values = OrderedDict(values)
        self._experiment_keys = tuple(experiment_keys)
        self._name = name
        self._slug = slug

    def __eq__(self, other):
        return isinstance(other, Assignment) and self._values == other._values

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(tuple(sorted((_k, repr(_v)) for _k, _v in six.iteritems(self._values))))

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, self.slug)

    def __getitem__(self, key):
        return self._values[key]

    @property
    def values(self):
        return OrderedDict(self._values)

    @property
    def slug(self):
        """``k1_v1-k2_v2-...`` in experiments key order; the configuration name if nothing is permuted"""
        if self._slug is not None:
            return self._slug
        if not self._experiment_keys:
            return self._name or 'default'
        return '-'.join(_slug_fragment(_k, self._values[_k]) for _k in self._experiment_keys)

    def to_document(self):
        return dict(self._values)


def expand(config):
    """
    Cartesian product over the experiments lists. The last experiments key varies fastest;
    every assignment also carries all one-to-one parameters.

    :rtype: list of :py:class:`Assignment`
    """
    _keys = list(config.experiments)
    _assignments = []
    for _combination in itertools.product(*[config.experiments[_k] for _k in _keys]):
        _values = config.parameters
        _values.update(zip(_keys, _combination))
        _assignments.append(Assignment(_values, _keys, name=config.name))
    logger.debug("Expanded '%s' into %d assignment(s)", config.name, len(_assignments))
    return _assignments


def load_experiment_config(filename):
    """
    Read an experiment configuration YAML file.

    :raise ExperimentConfigError: if the file is no valid configuration
    """
    from ..representation import read_file, DReprError
    try:
        return read_file('experiment', filename, 'yaml')
    except DReprError as _e:
        raise ExperimentConfigError(str(_e))
