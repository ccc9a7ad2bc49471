"""
Provider bindings: interchangeable adapters behind one :py:func:`translate` call.

``local-dictionary`` bindings look the text up in a dictionary and report the measured time,
``simulated-latency`` bindings stand in for remote vendors and report a latency drawn from
their latency model.
"""

import abc
import datetime
import logging
import threading
import time

from collections import OrderedDict

import numpy as np
import six

from ..config import kc
from ..tools import is_token
from .records import InvocationRecord, ProviderError, UnsupportedPairError

__all__ = ['Clock', 'ProviderBinding', 'LocalDictionaryBinding', 'SimulatedLatencyBinding', 'LatencyModel',
           'BINDING_KINDS', 'LOCAL_DICTIONARY', 'SIMULATED_LATENCY', 'translate', 'load_dictionary',
           'binding_from_document', 'bindings_from_config', 'apply_registry_costs']

logger = logging.getLogger(__name__)

LOCAL_DICTIONARY = 'local-dictionary'
SIMULATED_LATENCY = 'simulated-latency'
BINDING_KINDS = (LOCAL_DICTIONARY, SIMULATED_LATENCY)


class Clock(object):
    """Wall clock, elapsed-time timer and sleep used by the facade."""

    def __init__(self, simulate_delay=None):
        self._simulate_delay = kc('provider', 'simulate_delay') if simulate_delay is None else simulate_delay

    def now(self):
        return datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None, microsecond=0)

    def timer(self):
        return time.perf_counter()

    def sleep(self, seconds):
        if self._simulate_delay:
            time.sleep(seconds)


class LatencyModel(object):
    """
    Fixed latency (a number) or a uniform range ``[low, high]`` in seconds.
    Draws come from a seeded ``numpy.random.RandomState``.
    """

    def __init__(self, latency, seed=None):
        if isinstance(latency, (list, tuple)):
            if len(latency) != 2:
                raise ProviderError("Latency range must be [low, high], got {!r}".format(latency))
            self._low, self._high = float(latency[0]), float(latency[1])
        else:
            self._low = self._high = float(latency)
        if self._low < 0 or self._high < self._low:
            raise ProviderError("Invalid latency model [{}, {}]".format(self._low, self._high))
        self._random_state = np.random.RandomState(seed)
        self._lock = threading.Lock()

    def __repr__(self):
        return "{}({}, {})".format(self.__class__.__name__, self._low, self._high)

    @property
    def fixed(self):
        return self._low == self._high

    @property
    def bounds(self):
        return (self._low, self._high)

    def sample(self):
        if self.fixed:
            return self._low
        with self._lock:
            return float(self._random_state.uniform(self._low, self._high))


def load_dictionary(documents=None):
    """translation dictionary ``(text, from, to) -> output`` from a list of documents"""
    if documents is None:
        documents = kc('provider', 'dictionary')
    _dictionary = dict()
    for _doc in documents or ():
        _dictionary[(_doc['text'], _doc['from'], _doc['to'])] = _doc['output']
    return _dictionary


@six.add_metaclass(abc.ABCMeta)
class ProviderBinding(object):
    KIND = None

    def __init__(self, label, dictionary=None, cost_per_call=0.0, entry_id=None):
        if not is_token(label):
            raise ProviderError("Invalid provider label {!r}".format(label))
        if cost_per_call < 0:
            raise ProviderError("Provider '{}': cost_per_call must not be negative".format(label))
        self._label = label
        self._dictionary = dict(load_dictionary() if dictionary is None else dictionary)
        self._cost_per_call = float(cost_per_call)
        self._entry_id = entry_id

    def __repr__(self):
        return "{}(label={!r})".format(self.__class__.__name__, self._label)

    @property
    def label(self):
        return self._label

    @property
    def kind(self):
        return self.KIND

    @property
    def cost_per_call(self):
        return self._cost_per_call

    @property
    def entry_id(self):
        """id of the registry entry describing this provider, if linked"""
        return self._entry_id

    def supports(self, request):
        return (request.text, request.source_language, request.target_language) in self._dictionary

    def _lookup(self, request):
        try:
            return self._dictionary[(request.text, request.source_language, request.target_language)]
        except KeyError:
            raise UnsupportedPairError("Provider '{}' cannot translate {!r} from '{}' to '{}'".format(
                self._label, request.text, request.source_language, request.target_language))

    def with_cost(self, cost_per_call):
        _copy = object.__new__(self.__class__)
        _copy.__dict__.update(self.__dict__)
        _copy._cost_per_call = float(cost_per_call)
        return _copy

    @abc.abstractmethod
    def invoke(self, request, clock):
        """return ``(output, elapsed seconds)``"""
        pass


class LocalDictionaryBinding(ProviderBinding):
    KIND = LOCAL_DICTIONARY

    def invoke(self, request, clock):
        _start = clock.timer()
        _output = self._lookup(request)
        return _output, max(0.0, clock.timer() - _start)


class SimulatedLatencyBinding(ProviderBinding):
    KIND = SIMULATED_LATENCY

    def __init__(self, label, latency, dictionary=None, cost_per_call=0.0, entry_id=None, seed=None):
        super(SimulatedLatencyBinding, self).__init__(label, dictionary=dictionary, cost_per_call=cost_per_call,
                                                      entry_id=entry_id)
        self._latency_model = latency if isinstance(latency, LatencyModel) else LatencyModel(latency, seed=seed)

    @property
    def latency_model(self):
        return self._latency_model

    def invoke(self, request, clock):
        _output = self._lookup(request)
        _latency = self._latency_model.sample()
        clock.sleep(_latency)
        return _output, _latency


def translate(binding, request, clock=None):
    """
    Invoke one binding and return the uniform record.

    :rtype: :py:class:`~asf.provider.records.InvocationRecord`
    :raise UnsupportedPairError: if the binding cannot serve the request
    """
    _clock = clock or Clock()
    _date = _clock.now()
    _output, _elapsed = binding.invoke(request, _clock)
    logger.debug("Provider '%s' answered in %.4f s", binding.label, _elapsed)
    return InvocationRecord(date=_date, input=request.text, input_language=request.source_language,
                            output=_output, output_language=request.target_language,
                            provider=binding.label, time=_elapsed)


def binding_from_document(document, dictionary=None):
    """build a binding from its configuration document"""
    _doc = dict(document)
    _kind = _doc.pop('kind', None)
    _label = _doc.pop('label', None)
    if 'dictionary' in _doc:
        dictionary = load_dictionary(_doc.pop('dictionary'))
    _common = dict(dictionary=dictionary, cost_per_call=_doc.pop('cost_per_call', 0.0),
                   entry_id=_doc.pop('entry_id', None))
    if _kind == LOCAL_DICTIONARY:
        _binding = LocalDictionaryBinding(_label, **_common)
    elif _kind == SIMULATED_LATENCY:
        if 'latency' not in _doc:
            raise ProviderError("Simulated provider '{}' needs a latency".format(_label))
        _binding = SimulatedLatencyBinding(_label, _doc.pop('latency'), seed=_doc.pop('seed', None), **_common)
    else:
        raise ProviderError("Provider '{}' has unknown kind {!r}! Expected one of {}.".format(
            _label, _kind, BINDING_KINDS))
    if _doc:
        raise ProviderError("Provider '{}' has unknown key(s): {}".format(_label, sorted(_doc)))
    return _binding


def bindings_from_config(documents=None, dictionary=None):
    """
    All configured bindings, keyed by label in configuration order.

    :raise ProviderError: on duplicate labels or malformed binding documents
    """
    if documents is None:
        documents = kc('provider', 'bindings')
    _dictionary = load_dictionary() if dictionary is None else dictionary
    _bindings = OrderedDict()
    for _doc in documents:
        _binding = binding_from_document(_doc, dictionary=_dictionary)
        if _binding.label in _bindings:
            raise ProviderError("Duplicate provider label '{}'".format(_binding.label))
        _bindings[_binding.label] = _binding
    return _bindings


def apply_registry_costs(bindings, store):
    """
    Use the structured SLA cost (``sla.cost``) of linked registry entries as the cost per call.
    Bindings without a linked entry, or whose entry has no numeric cost, are returned unchanged.
    """
    _result = []
    for _binding in bindings:
        _cost = None
        if _binding.entry_id is not None:
            _entry = store.get(_binding.entry_id)
            if isinstance(_entry.sla, dict) and isinstance(_entry.sla.get('cost'), (six.integer_types, float)):
                _cost = _entry.sla['cost']
        _result.append(_binding if _cost is None else _binding.with_cost(_cost))
    return _result
