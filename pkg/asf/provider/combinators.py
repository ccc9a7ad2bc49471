"""
Cooperation and competition of providers.

Cooperation fans a request out to a team of bindings and returns every outcome. Competition
selects exactly one binding by policy and invokes only that one.
"""

import logging

from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import six

from .bindings import Clock, translate
from .records import InvocationFailure, ProviderError, CooperationError, CompetitionError

__all__ = ['cooperate', 'compete', 'select', 'consensus',
           'MIN_MEAN_LATENCY', 'MIN_COST', 'PREFERENCE_LIST', 'COMPETITION_POLICIES']

logger = logging.getLogger(__name__)

MIN_MEAN_LATENCY = 'min-mean-latency'
MIN_COST = 'min-cost'
PREFERENCE_LIST = 'preference-list'
COMPETITION_POLICIES = (MIN_MEAN_LATENCY, MIN_COST, PREFERENCE_LIST)


def _invoke_slot(binding, request, clock):
    try:
        return translate(binding, request, clock)
    except ProviderError as _e:
        logger.warning("Provider '%s' failed: %s", binding.label, _e)
        return InvocationFailure(binding.label, str(_e))


def cooperate(bindings, request, clock=None, max_workers=None):
    """
    Invoke every binding (concurrently) and return their outcomes in binding order. A failing
    binding yields an :py:class:`~asf.provider.records.InvocationFailure` slot.

    :raise CooperationError: if no binding is given or all of them fail
    """
    _bindings = list(bindings)
    if not _bindings:
        raise CooperationError("Cooperation needs at least one provider")
    _clock = clock or Clock()
    with ThreadPoolExecutor(max_workers=max_workers or len(_bindings)) as _pool:
        _futures = [_pool.submit(_invoke_slot, _b, request, _clock) for _b in _bindings]
        _slots = [_f.result() for _f in _futures]
    _failures = [_s for _s in _slots if not _s.ok]
    if len(_failures) == len(_slots):
        raise CooperationError("All {} provider(s) failed".format(len(_slots)), failures=_failures)
    return _slots


def consensus(slots):
    """
    The most frequent output among the successful records (ties: lexicographically smallest)
    and the labels of the providers that produced it.
    """
    _records = [_s for _s in slots if _s.ok]
    if not _records:
        raise CooperationError("No successful record to combine")
    _counts = Counter(_r.output for _r in _records)
    _output = min(_counts, key=lambda _o: (-_counts[_o], _o))
    return _output, [_r.provider for _r in _records if _r.output == _output]


def _mean_of(stats_entry):
    return getattr(stats_entry, 'mean', stats_entry)


def select(bindings, request, policy, stats=None, preferences=None):
    """
    Apply a competition policy without invoking anything.

    :param policy: one of ``min-mean-latency`` (needs `stats`: label -> stats or mean),
        ``min-cost`` or ``preference-list`` (needs `preferences`: ordered labels)
    :return: the chosen binding
    :raise CompetitionError: if the policy cannot be resolved over the bindings
    """
    _bindings = sorted(bindings, key=lambda _b: _b.label)
    if not _bindings:
        raise CompetitionError("Competition needs at least one provider")
    if policy == MIN_MEAN_LATENCY:
        _stats = stats or {}
        _missing = [_b.label for _b in _bindings if _b.label not in _stats]
        if _missing:
            raise CompetitionError("No latency statistics for provider(s): {}".format(', '.join(_missing)))
        return min(_bindings, key=lambda _b: (_mean_of(_stats[_b.label]), _b.label))
    if policy == MIN_COST:
        return min(_bindings, key=lambda _b: (_b.cost_per_call, _b.label))
    if policy == PREFERENCE_LIST:
        _by_label = dict((_b.label, _b) for _b in _bindings)
        for _label in preferences or ():
            _binding = _by_label.get(_label)
            if _binding is not None and _binding.supports(request):
                return _binding
        raise CompetitionError("No preferred provider serves '{}' -> '{}'".format(*request.pair))
    raise CompetitionError("Unknown competition policy {!r}! Expected one of {}.".format(
        policy, COMPETITION_POLICIES))


def compete(bindings, request, policy, stats=None, preferences=None, clock=None):
    """
    Select one binding by `policy` (ties broken by label) and invoke only that one.

    :return: ``(chosen label, record)``
    """
    _chosen = select(bindings, request, policy, stats=stats, preferences=preferences)
    logger.info("Policy '%s' selected provider '%s'", policy, _chosen.label)
    return _chosen.label, translate(_chosen, request, clock)
