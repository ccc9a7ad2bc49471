"""
Benchmark harness: repeated invocations and their descriptive statistics.

The sample standard deviation uses the ``n - 1`` denominator (0 for a single sample) and the
quartiles interpolate linearly between closest ranks.
"""

import logging

from collections import namedtuple, OrderedDict

import numpy as np
import six
import tabulate

from .bindings import Clock, translate
from .records import ProviderError, BenchmarkError, StatsError

__all__ = ['SampleStats', 'STAT_LABELS', 'stats', 'collect_samples', 'benchmark', 'compare',
           'format_stats_table', 'plot_benchmark']

logger = logging.getLogger(__name__)

STAT_LABELS = ('count', 'mean', 'std', 'min', '25%', '50%', '75%', 'max')


class SampleStats(namedtuple('SampleStats', ('count', 'mean', 'std', 'min', 'q25', 'q50', 'q75', 'max'))):
    __slots__ = ()

    def to_document(self):
        return OrderedDict(zip(STAT_LABELS, (int(self.count),) + tuple(float(_v) for _v in self[1:])))


def stats(samples):
    """
    :param samples: nonempty sequence of numbers
    :rtype: :py:class:`SampleStats`
    :raise StatsError: for empty or non-finite input
    """
    _samples = np.asarray(list(samples), dtype=float)
    if _samples.size == 0:
        raise StatsError("Cannot compute statistics of an empty sample")
    if not np.all(np.isfinite(_samples)):
        raise StatsError("Samples must be finite numbers")
    _min, _max = float(np.min(_samples)), float(np.max(_samples))
    _std = float(np.std(_samples, ddof=1)) if _samples.size > 1 else 0.0
    _q25, _q50, _q75 = (float(_q) for _q in np.percentile(_samples, [25, 50, 75]))
    # rounding may push the mean of equal samples just outside [min, max]
    _mean = float(np.clip(np.mean(_samples), _min, _max))
    return SampleStats(int(_samples.size), _mean, _std, _min, _q25, _q50, _q75, _max)


def collect_samples(binding, request, n, clock=None):
    """invocation times of `n` consecutive translations"""
    if n < 1:
        raise BenchmarkError("Benchmark needs n >= 1, got {}".format(n))
    _clock = clock or Clock()
    _samples = []
    for _i in six.moves.range(n):
        try:
            _samples.append(translate(binding, request, _clock).time)
        except ProviderError as _e:
            raise BenchmarkError("Benchmark of '{}' aborted after {} of {} invocation(s): {}".format(
                binding.label, _i, n, _e), completed=_i)
    return _samples


def benchmark(binding, request, n, clock=None):
    """statistics of `n` invocation times of one binding"""
    _stats = stats(collect_samples(binding, request, n, clock))
    logger.info("Benchmarked '%s': n=%d, mean=%.6f s", binding.label, _stats.count, _stats.mean)
    return _stats


def compare(bindings, request, n, clock=None, samples=None):
    """
    Benchmark several bindings on the same request.

    :param samples: optional dict receiving the raw times per label (for plotting)
    :return: ordered mapping label -> :py:class:`SampleStats`
    """
    _result = OrderedDict()
    for _binding in bindings:
        _samples = collect_samples(_binding, request, n, clock)
        if samples is not None:
            samples[_binding.label] = _samples
        _result[_binding.label] = stats(_samples)
    return _result


def format_stats_table(stats_by_label, table_format='simple', float_format='.6f'):
    """one row per statistic, one column per provider"""
    _labels = list(stats_by_label)
    _rows = []
    for _i, _stat in enumerate(STAT_LABELS):
        _rows.append([_stat] + [stats_by_label[_l][_i] for _l in _labels])
    return tabulate.tabulate(_rows, headers=[''] + _labels, tablefmt=table_format, floatfmt=float_format)


def plot_benchmark(samples_by_label, filename, title="Translation time per invocation"):
    """draw the per-invocation times of each provider and save the figure to `filename`"""
    from matplotlib.figure import Figure
    from matplotlib.backends.backend_agg import FigureCanvasAgg

    _figure = Figure(figsize=(8, 4.5))
    FigureCanvasAgg(_figure)
    _axes = _figure.add_subplot(111)
    for _label, _samples in six.iteritems(samples_by_label):
        _axes.plot(np.arange(1, len(_samples) + 1), _samples, marker='.', linewidth=1, label=_label)
    _axes.set_xlabel("invocation")
    _axes.set_ylabel("time [s]")
    _axes.set_title(title)
    _axes.legend(loc='best')
    _figure.tight_layout()
    _figure.savefig(filename)
    logger.info("Saved benchmark plot to %s", filename)
    return _figure
