"""
Audit of a service entry against the FAIR principles extended by deployability (D) and
operability (O).

Every principle is reduced to a decidable predicate over the entry fields and a few facts
about the hosting registry, which are passed in explicitly as an :py:class:`AuditContext`.
"""

from __future__ import print_function

import logging
import sys

from collections import namedtuple

import tabulate

from ..config import kc
from ..core import (is_present, validate_entry, role_for_entry_class, entry_format_problems,
                    ENTRY_ATTRIBUTES, LIBRARY)
from ..tools import is_uuid

__all__ = ['audit', 'AuditContext', 'ComplianceReport', 'PrincipleCheck', 'PRINCIPLES',
           'PASS', 'FAIL', 'NOT_EVALUABLE']

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
NOT_EVALUABLE = 'not-evaluable'

PRINCIPLES = ('F1', 'F2', 'F3', 'F4', 'A1', 'A1.1', 'A1.2', 'A2', 'I1', 'I2', 'I3',
              'R1', 'R1.1', 'R1.2', 'R1.3', 'D1', 'O1')

_RICH_METADATA = ('description', 'tags', 'categories', 'version', 'license', 'authors')


class AuditContext(namedtuple('AuditContext', ('indexed_in_search', 'protocol_open', 'metadata_retained',
                                               'security_enabled'))):
    """Facts about the registry hosting an entry."""
    __slots__ = ()

    def __new__(cls, indexed_in_search=True, protocol_open=True, metadata_retained=True, security_enabled=None):
        if security_enabled is None:
            security_enabled = bool(kc('security', 'enabled'))
        return super(AuditContext, cls).__new__(cls, bool(indexed_in_search), bool(protocol_open),
                                                bool(metadata_retained), bool(security_enabled))

    @classmethod
    def from_document(cls, document):
        _unknown = set(document or {}) - set(cls._fields)
        if _unknown:
            raise ValueError("Unknown audit context flag(s): {}".format(sorted(_unknown)))
        return cls(**(document or {}))


class PrincipleCheck(namedtuple('PrincipleCheck', ('code', 'status', 'reason'))):
    __slots__ = ()

    def to_document(self):
        return self._asdict()


class ComplianceReport(namedtuple('ComplianceReport', ('checks',))):
    """The 17 principle checks in fixed order; ``overall`` passes iff no check fails."""
    __slots__ = ()

    @property
    def overall(self):
        return FAIL if any(_c.status == FAIL for _c in self.checks) else PASS

    def status(self, code):
        for _check in self.checks:
            if _check.code == code:
                return _check.status
        raise KeyError(code)

    def failed(self):
        return [_c.code for _c in self.checks if _c.status == FAIL]

    def to_document(self):
        return dict(checks=[dict(_c._asdict()) for _c in self.checks], overall=self.overall)

    def report(self, output_stream=sys.stdout, table_format='simple'):
        """print a table of all checks followed by the overall result"""
        _rows = [(_c.code, _c.status, _c.reason) for _c in self.checks]
        print(tabulate.tabulate(_rows, headers=('principle', 'status', 'reason'), tablefmt=table_format),
              file=output_stream)
        print("overall: {}".format(self.overall), file=output_stream)


def _missing(entry, attributes):
    return [_a for _a in attributes if not is_present(getattr(entry, _a))]


def _check(code, passed, reason_pass, reason_fail):
    return PrincipleCheck(code, PASS if passed else FAIL, reason_pass if passed else reason_fail)


def _references_id(entry):
    _pointers = []
    if is_present(entry.specification_schema):
        _pointers.append(entry.specification_schema)
    if entry.data_integration is not None:
        _pointers.extend(_u for _u in (entry.data_integration.upload_endpoint,
                                       entry.data_integration.download_endpoint) if _u)
    if not _pointers:
        return False, "neither specification schema nor data integration present"
    if not is_present(entry.id):
        # a missing id is reported by F1 only
        return True, "metadata pointer present"
    if any(entry.id in str(_p) for _p in _pointers):
        return True, "metadata pointer references the entry id"
    return False, "no metadata pointer references the entry id"


def _round_trips(entry):
    from ..representation import DReprError
    from ..core.entry import ServiceEntry
    try:
        _copy = ServiceEntry.from_document(entry.to_document())
    except (DReprError, TypeError, ValueError, AttributeError) as _e:
        return False, "entry document does not parse: {}".format(_e)
    if _copy != entry:
        return False, "entry document does not reproduce the entry"
    _problems = entry_format_problems(entry, attributes=[_a for _a in ENTRY_ATTRIBUTES if _a != 'id'])
    if _problems:
        return False, "; ".join(_problems)
    return True, "entry document is well formed"


def audit(entry, context=None, vocabulary=None):
    """
    Audit an entry against the FAIR+DO principles.

    :param entry: the entry to audit
    :type entry: :py:class:`~asf.core.entry.ServiceEntry`
    :param context: facts about the hosting registry; all flags true by default
    :type context: :py:class:`AuditContext`
    :param vocabulary: controlled tag vocabulary; ``registry.vocabulary`` from the configuration if omitted
    :rtype: :py:class:`ComplianceReport`
    """
    _context = context if context is not None else AuditContext()
    if isinstance(_context, dict):
        _context = AuditContext.from_document(_context)
    _vocabulary = set(vocabulary if vocabulary is not None else kc('registry', 'vocabulary'))
    _checks = []

    # findable
    _checks.append(_check('F1', is_uuid(entry.id), "persistent UUID identifier",
                          "missing or malformed identifier"))
    _missing_rich = _missing(entry, _RICH_METADATA)
    _checks.append(_check('F2', not _missing_rich, "rich metadata present",
                          "missing: {}".format(', '.join(_missing_rich))))
    _ok, _reason = _references_id(entry)
    _checks.append(_check('F3', _ok, _reason, _reason))
    _checks.append(_check('F4', _context.indexed_in_search, "indexed in a searchable registry",
                          "not indexed in a searchable registry"))

    # accessible
    _checks.append(_check('A1', is_present(entry.endpoint) or is_present(entry.source),
                          "retrievable through endpoint or source", "neither endpoint nor source present"))
    _checks.append(_check('A1.1', _context.protocol_open, "open, free protocol", "protocol not open"))
    _checks.append(_check('A1.2', _context.security_enabled, "protocol supports authentication and authorization",
                          "security layer disabled"))
    _checks.append(_check('A2', _context.metadata_retained, "metadata retained beyond service lifetime",
                          "metadata not retained"))

    # interoperable
    _ok, _reason = _round_trips(entry)
    _checks.append(_check('I1', _ok, _reason, _reason))
    _tags = list(entry.tags or ())
    _outside = sorted(set(_tags) - _vocabulary)
    if not _tags:
        _checks.append(PrincipleCheck('I2', FAIL, "no tags"))
    else:
        _checks.append(_check('I2', not _outside, "tags drawn from the controlled vocabulary",
                              "tags outside the vocabulary: {}".format(', '.join(_outside))))
    _checks.append(_check('I3', is_present(entry.additional_metadata), "references further metadata",
                          "no additional metadata"))

    # reusable
    _checks.append(_check('R1', not _missing_rich, "richly described",
                          "missing: {}".format(', '.join(_missing_rich))))
    _checks.append(_check('R1.1', is_present(entry.license), "license present", "no license"))
    _missing_provenance = _missing(entry, ('owner', 'created', 'modified'))
    _checks.append(_check('R1.2', not _missing_provenance, "provenance present",
                          "missing: {}".format(', '.join(_missing_provenance))))
    _role = role_for_entry_class(entry.entry_class)
    _report = validate_entry(entry, _role)
    _violations = [_v for _v in _report.violations if _v != 'id required' and not _v.startswith('id:')]
    _checks.append(_check('R1.3', not _violations, "meets the {} profile".format(_role),
                          "; ".join(_violations)))

    # deployable, operational
    if entry.entry_class == LIBRARY:
        _checks.append(_check('D1', is_present(entry.source), "source available for deployment",
                              "library without source"))
        _checks.append(PrincipleCheck('O1', NOT_EVALUABLE, "libraries have no running instance"))
    else:
        _checks.append(_check('D1', is_present(entry.additional_metadata), "deployment notes in additional metadata",
                              "no deployment notes"))
        _checks.append(_check('O1', is_present(entry.heartbeat), "heartbeat recorded", "no heartbeat recorded"))

    _compliance = ComplianceReport(checks=tuple(_checks))
    logger.debug("FAIR audit of '%s': %s", entry.name, _compliance.overall)
    return _compliance
