"""
Value types of the provider facade: requests, the uniform invocation record and failure slots.
"""

import json
import re

from collections import namedtuple, OrderedDict

import six

__all__ = ['TranslationRequest', 'InvocationRecord', 'InvocationFailure', 'RECORD_KEYS', 'RECORD_DATE_FORMAT',
           'ProviderError', 'UnsupportedPairError', 'CooperationError', 'CompetitionError', 'BenchmarkError',
           'StatsError']

RECORD_KEYS = ('date', 'input', 'input_language', 'output', 'output_language', 'provider', 'time')
RECORD_DATE_FORMAT = '%m/%d/%Y %H:%M:%S'
_LANGUAGE_CODE = re.compile(r'^[a-z]{2}$')


class ProviderError(Exception):
    pass


class UnsupportedPairError(ProviderError):
    pass


class CooperationError(ProviderError):
    def __init__(self, message, failures=()):
        super(CooperationError, self).__init__(message)
        self.failures = tuple(failures)


class CompetitionError(ProviderError):
    pass


class BenchmarkError(ProviderError):
    def __init__(self, message, completed=0):
        super(BenchmarkError, self).__init__(message)
        self.completed = completed


class StatsError(ProviderError):
    pass


class TranslationRequest(namedtuple('TranslationRequest', ('text', 'source_language', 'target_language'))):
    __slots__ = ()

    def __new__(cls, text, source_language, target_language):
        if not isinstance(text, six.string_types) or not text.strip():
            raise ProviderError("Translation text must be a nonempty string, got {!r}".format(text))
        for _code in (source_language, target_language):
            if not isinstance(_code, six.string_types) or not _LANGUAGE_CODE.match(_code):
                raise ProviderError("Invalid language code {!r}: expected two lowercase letters".format(_code))
        return super(TranslationRequest, cls).__new__(cls, text, source_language, target_language)

    @property
    def pair(self):
        return (self.source_language, self.target_language)

    def to_document(self):
        return OrderedDict([('text', self.text), ('from', self.source_language), ('to', self.target_language)])

    @classmethod
    def from_document(cls, document):
        if not isinstance(document, dict):
            raise ProviderError("Translation request must be a mapping")
        try:
            return cls(document['text'], document['from'], document['to'])
        except KeyError as _e:
            raise ProviderError("Translation request misses key {}".format(_e))


class InvocationRecord(namedtuple('InvocationRecord', RECORD_KEYS)):
    """
    The uniform result of one provider invocation. ``date`` is a naive UTC ``datetime``,
    ``time`` the elapsed seconds.
    """
    __slots__ = ()

    def __new__(cls, date, input, input_language, output, output_language, provider, time):
        if time < 0:
            raise ProviderError("Invocation time must not be negative, got {}".format(time))
        return super(InvocationRecord, cls).__new__(
            cls, date, input, input_language, output, output_language, provider, float(time))

    @property
    def ok(self):
        return True

    def to_document(self):
        """the seven record keys, in record order"""
        return OrderedDict([
            ('date', self.date.strftime(RECORD_DATE_FORMAT)),
            ('input', self.input),
            ('input_language', self.input_language),
            ('output', self.output),
            ('output_language', self.output_language),
            ('provider', self.provider),
            ('time', round(self.time, 4)),
        ])

    def to_json(self):
        """single-line JSON object; ``time`` always carries four decimals"""
        _doc = self.to_document()
        _parts = ['{}: {}'.format(json.dumps(_k), json.dumps(_v)) for _k, _v in six.iteritems(_doc) if _k != 'time']
        _parts.append('"time": {:.4f}'.format(self.time))
        return '{' + ', '.join(_parts) + '}'


class InvocationFailure(namedtuple('InvocationFailure', ('provider', 'error'))):
    """A failed slot of a cooperative invocation."""
    __slots__ = ()

    @property
    def ok(self):
        return False

    def to_document(self):
        return OrderedDict([('provider', self.provider), ('error', self.error)])
