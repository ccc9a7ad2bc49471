"""
Provider role profiles and entry validation.

A role profile says, for every :py:class:`~asf.core.entry.ServiceEntry` attribute, whether a
catalog, service or library provider must (``required``), may (``optional``) or should not
(``not-applicable``) supply it. The three built-in profiles are read from the configuration
node ``registry.role_profiles``.
"""

import datetime
import logging
import numbers

from collections import namedtuple

import six

from ..config import kc
from ..tools import is_token, is_url, is_uuid
from .entry import (ENTRY_ATTRIBUTES, ACCESS_KINDS, ENTRY_CLASSES, HEARTBEAT_STATES,
                    LIBRARY,
                    ParameterSpec, ResponseSpec, HeartbeatStatus, DataIntegration)

__all__ = ['RoleProfile', 'RoleProfileError', 'ValidationReport', 'validate_entry', 'is_present',
           'entry_format_problems', 'role_for_entry_class',
           'REQUIRED', 'OPTIONAL', 'NOT_APPLICABLE',
           'CATALOG_PROVIDER', 'SERVICE_PROVIDER', 'LIBRARY_PROVIDER', 'ROLES']

logger = logging.getLogger(__name__)

REQUIRED = 'required'
OPTIONAL = 'optional'
NOT_APPLICABLE = 'not-applicable'
_REQUIREMENT_LEVELS = (REQUIRED, OPTIONAL, NOT_APPLICABLE)

CATALOG_PROVIDER = 'catalog-provider'
SERVICE_PROVIDER = 'service-provider'
LIBRARY_PROVIDER = 'library-provider'
ROLES = (CATALOG_PROVIDER, SERVICE_PROVIDER, LIBRARY_PROVIDER)


class RoleProfileError(Exception):
    pass


class ValidationReport(namedtuple('ValidationReport', ('valid', 'violations', 'warnings'))):
    __slots__ = ()

    def to_document(self):
        return dict(valid=self.valid, violations=list(self.violations), warnings=list(self.warnings))


class RoleProfile(object):
    """The required/optional/not-applicable matrix of one provider role."""

    def __init__(self, role, requirements):
        _missing = [_a for _a in ENTRY_ATTRIBUTES if _a not in requirements]
        if _missing:
            raise RoleProfileError("Role profile '{}' does not cover attribute(s): {}".format(role, _missing))
        _unknown = [_a for _a in requirements if _a not in ENTRY_ATTRIBUTES]
        if _unknown:
            raise RoleProfileError("Role profile '{}' names unknown attribute(s): {}".format(role, _unknown))
        for _attribute, _level in six.iteritems(requirements):
            if _level not in _REQUIREMENT_LEVELS:
                raise RoleProfileError("Invalid requirement '{}' for attribute '{}' in role profile '{}'! "
                                       "Expected one of {}.".format(_level, _attribute, role, _REQUIREMENT_LEVELS))
        self._role = role
        self._requirements = dict(requirements)

    def __repr__(self):
        return "{}(role={!r})".format(self.__class__.__name__, self._role)

    def __eq__(self, other):
        return isinstance(other, RoleProfile) and (self._role, self._requirements) == (other._role, other._requirements)

    def __ne__(self, other):
        return not self == other

    @classmethod
    def builtin(cls, role):
        """One of the three built-in profiles (catalog/service/library provider)."""
        if isinstance(role, RoleProfile):
            return role
        _profiles = kc('registry', 'role_profiles')
        if role not in _profiles:
            raise RoleProfileError("Unknown provider role '{}'! Available roles are: {}".format(role, ROLES))
        return cls(role, _profiles[role])

    @property
    def role(self):
        return self._role

    @property
    def requirements(self):
        return dict(self._requirements)

    def requirement(self, attribute):
        return self._requirements[attribute]

    def attributes_with(self, level):
        return tuple(_a for _a in ENTRY_ATTRIBUTES if self._requirements[_a] == level)


def role_for_entry_class(entry_class):
    """the provider role implied by an entry class"""
    if entry_class == LIBRARY:
        return LIBRARY_PROVIDER
    return SERVICE_PROVIDER


def is_present(value):
    """Absent means ``None``, a blank string or an empty sequence. ``False`` is present."""
    if value is None:
        return False
    if isinstance(value, six.string_types):
        return bool(value.strip())
    if isinstance(value, (list, tuple, dict)):
        return len(value) > 0
    return True


def _is_text(value):
    return isinstance(value, six.string_types) and bool(value.strip())


def _check_parameters(values, spec_type):
    _problems = []
    for _i, _spec in enumerate(values):
        if not isinstance(_spec, spec_type):
            _problems.append("item {} is not a {}".format(_i, spec_type.__name__))
            continue
        if _spec.access not in ACCESS_KINDS:
            _problems.append("item {} has access '{}', expected one of {}".format(_i, _spec.access, ACCESS_KINDS))
        if not is_token(_spec.name):
            _problems.append("item {} has an invalid name".format(_i))
    return _problems


def _check_tags(tags):
    _problems = []
    if len(set(tags)) != len(tags):
        _problems.append("tags must be unique")
    for _tag in tags:
        if not is_token(_tag) or _tag != _tag.lower():
            _problems.append("tag '{}' is not a lowercase token".format(_tag))
    return _problems


_FORMAT_CHECKS = dict(
    id=lambda v: [] if is_uuid(v) else ["must be a UUID"],
    name=lambda v: [] if is_token(v) else ["must be a nonempty token"],
    public=lambda v: [] if isinstance(v, bool) else ["must be a boolean"],
    microservice=lambda v: [] if isinstance(v, bool) else ["must be a boolean"],
    endpoint=lambda v: [] if is_url(v) else ["must be a URL"],
    documentation=lambda v: [] if is_url(v) else ["must be a URL"],
    source=lambda v: [] if is_url(v) else ["must be a URL"],
    input_parameters=lambda v: _check_parameters(v, ParameterSpec),
    output_parameters=lambda v: _check_parameters(v, ResponseSpec),
    modified=lambda v: [] if isinstance(v, datetime.datetime) else ["must be a timestamp"],
    created=lambda v: [] if isinstance(v, datetime.datetime) else ["must be a timestamp"],
    tags=_check_tags,
    categories=lambda v: [] if all(_is_text(_c) for _c in v) else ["categories must be nonempty labels"],
    heartbeat=lambda v: [] if isinstance(v, HeartbeatStatus) and v.state in HEARTBEAT_STATES
                        else ["must be a heartbeat status"],
    sla=lambda v: [] if isinstance(v, (dict,) + six.string_types) else ["must be text or a mapping"],
    caching_interval=lambda v: [] if isinstance(v, numbers.Real) and not isinstance(v, bool) and v > 0
                               else ["must be a positive number of seconds"],
    data_integration=lambda v: [] if isinstance(v, DataIntegration) and (v.upload_endpoint or v.download_endpoint)
                               else ["needs an upload or download endpoint"],
    entry_class=lambda v: [] if v in ENTRY_CLASSES else ["must be one of {}".format(ENTRY_CLASSES)],
)


def entry_format_problems(entry, attributes=ENTRY_ATTRIBUTES):
    """list of '<attribute>: <problem>' strings for present but malformed attributes"""
    _problems = []
    for _attribute in attributes:
        _value = getattr(entry, _attribute)
        if not is_present(_value):
            continue
        _check = _FORMAT_CHECKS.get(_attribute)
        if _check is None:
            if not _is_text(_value):
                _problems.append("{}: must be text".format(_attribute))
            continue
        _problems.extend("{}: {}".format(_attribute, _p) for _p in _check(_value))

    if 'created' in attributes and 'modified' in attributes:
        if isinstance(entry.created, datetime.datetime) and isinstance(entry.modified, datetime.datetime):
            if entry.created > entry.modified:
                _problems.append("created: must not be later than modified")
    return _problems


def validate_entry(entry, role):
    """
    Check an entry against a provider role profile.

    :param entry: the entry to check
    :type entry: :py:class:`~asf.core.entry.ServiceEntry`
    :param role: a role profile or the name of a built-in one
    :return: report with ``valid`` set iff every required attribute is present and every present
             attribute is well formed. Present not-applicable attributes only produce warnings.
    :rtype: :py:class:`ValidationReport`
    """
    _profile = RoleProfile.builtin(role)
    _violations = []
    _warnings = []
    for _attribute in ENTRY_ATTRIBUTES:
        _level = _profile.requirement(_attribute)
        _present = is_present(getattr(entry, _attribute))
        if _level == REQUIRED and not _present:
            _violations.append("{} required".format(_attribute))
        elif _level == NOT_APPLICABLE and _present:
            _warnings.append("{} not applicable for {}".format(_attribute, _profile.role))
    _violations.extend(entry_format_problems(entry))
    for _warning in _warnings:
        logger.warning("Entry '%s': %s", entry.name, _warning)
    return ValidationReport(valid=not _violations, violations=tuple(_violations), warnings=tuple(_warnings))
