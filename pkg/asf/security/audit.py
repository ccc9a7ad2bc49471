"""
Append-only audit trail.

Records are kept in memory and, when the log has a file name, appended to it as
newline-delimited JSON and flushed to disk before :py:meth:`AuditLog.append` returns.
"""

import logging
import os
import threading

from collections import namedtuple

from ..io import JsonLinesFileHandle
from ..tools import utc_now, format_timestamp, parse_timestamp
from .principal import SecurityError

__all__ = ['AuditRecord', 'AuditLog', 'AuditPersistenceError', 'audit_append', 'OUTCOMES']

logger = logging.getLogger(__name__)

OUTCOMES = ('allow', 'deny', 'error')


class AuditPersistenceError(SecurityError):
    pass


class AuditRecord(namedtuple('AuditRecord', ('sequence', 'timestamp', 'subject', 'action', 'resource', 'outcome'))):
    __slots__ = ()

    def to_document(self):
        _doc = self._asdict()
        _doc['timestamp'] = format_timestamp(self.timestamp)
        return dict(_doc)

    @classmethod
    def from_document(cls, document):
        _doc = dict(document)
        _doc['timestamp'] = parse_timestamp(_doc['timestamp'])
        return cls(**_doc)


class AuditLog(object):

    def __init__(self, filename=None, clock=utc_now):
        self._filename = filename
        self._clock = clock
        self._lock = threading.Lock()
        self._records = []
        if filename is not None and os.path.exists(filename):
            self._records = self._read_file(filename)

    @staticmethod
    def _read_file(filename):
        _records = []
        try:
            for _i, _document in JsonLinesFileHandle(filename).documents():
                try:
                    _records.append(AuditRecord.from_document(_document))
                except (ValueError, KeyError, TypeError) as _e:
                    raise ValueError("'{}', line {}: {}".format(filename, _i, _e))
        except ValueError as _e:
            raise AuditPersistenceError("Corrupt audit log {}".format(_e))
        return _records

    def __len__(self):
        return len(self._records)

    @property
    def filename(self):
        return self._filename

    @property
    def next_sequence(self):
        return self._records[-1].sequence + 1 if self._records else 1

    def append(self, subject, action, resource, outcome):
        """
        Append one record with the next sequence number.

        :raise AuditPersistenceError: if the record cannot be written; the log is left unchanged
        """
        if outcome not in OUTCOMES:
            raise ValueError("Unknown audit outcome '{}'! Expected one of {}.".format(outcome, OUTCOMES))
        with self._lock:
            _record = AuditRecord(sequence=self.next_sequence, timestamp=self._clock(),
                                  subject=subject, action=action, resource=resource, outcome=outcome)
            if self._filename is not None:
                try:
                    JsonLinesFileHandle(self._filename, sync=True).append(_record.to_document())
                except (IOError, OSError) as _e:
                    raise AuditPersistenceError("Cannot append to audit log '{}': {}".format(self._filename, _e))
            self._records.append(_record)
        logger.debug("audit #%d %s %s %s -> %s", _record.sequence, subject, action, resource, outcome)
        return _record

    def records(self):
        """all records in sequence order"""
        with self._lock:
            return list(self._records)

    def to_document(self):
        return [_r.to_document() for _r in self.records()]


def audit_append(log, subject, action, resource, outcome):
    return log.append(subject=subject, action=action, resource=resource, outcome=outcome)
