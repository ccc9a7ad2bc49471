"""
Role and level-of-assurance based access policy.

A policy is an ordered list of rules ``(action pattern, resource pattern, required role,
minimum loa)``. Patterns are shell-style (:py:mod:`fnmatch`). The first rule whose patterns
match the requested action and resource decides; if none matches, access is denied.
"""

import fnmatch
import logging

from collections import namedtuple

from ..config import kc
from .principal import SecurityError, role_rank, loa_rank

__all__ = ['AccessRule', 'AccessPolicy', 'Decision', 'authorize', 'PolicyError']

logger = logging.getLogger(__name__)


class PolicyError(SecurityError):
    pass


class AccessRule(namedtuple('AccessRule', ('action', 'resource', 'role', 'loa'))):
    __slots__ = ()

    def __new__(cls, action, resource, role, loa='low'):
        try:
            role_rank(role)
            loa_rank(loa)
        except ValueError as _e:
            raise PolicyError("Invalid access rule ({}, {}): {}".format(action, resource, _e))
        return super(AccessRule, cls).__new__(cls, action, resource, role, loa)

    def matches(self, action, resource):
        return fnmatch.fnmatchcase(action, self.action) and fnmatch.fnmatchcase(resource, self.resource)

    def to_document(self):
        return self._asdict()


class Decision(namedtuple('Decision', ('allowed', 'reason', 'rule'))):
    """Outcome of an authorization check. A denial is a value, not an exception."""
    __slots__ = ()

    @property
    def outcome(self):
        return 'allow' if self.allowed else 'deny'

    def __bool__(self):
        return self.allowed

    __nonzero__ = __bool__

    def to_document(self):
        return dict(outcome=self.outcome, reason=self.reason)


class AccessPolicy(object):

    def __init__(self, rules=()):
        self._rules = tuple(_r if isinstance(_r, AccessRule) else AccessRule(**_r) for _r in rules)

    def __len__(self):
        return len(self._rules)

    def __iter__(self):
        return iter(self._rules)

    @classmethod
    def from_config(cls):
        """the default policy of the ``security.policy`` configuration node"""
        return cls(kc('security', 'policy'))

    @property
    def rules(self):
        return self._rules

    def first_match(self, action, resource):
        for _rule in self._rules:
            if _rule.matches(action, resource):
                return _rule
        return None

    def decide(self, principal, action, resource):
        _rule = self.first_match(action, resource)
        if _rule is None:
            return Decision(False, "no rule matches action '{}' on '{}'".format(action, resource), None)
        if not principal.has_role(_rule.role):
            return Decision(False, "role '{}' required".format(_rule.role), _rule)
        if loa_rank(principal.loa) < loa_rank(_rule.loa):
            return Decision(False, "level of assurance '{}' required".format(_rule.loa), _rule)
        return Decision(True, "granted by rule ({}, {})".format(_rule.action, _rule.resource), _rule)

    def to_document(self):
        return [_r.to_document() for _r in self._rules]


def authorize(principal, action, resource, policy=None):
    """
    Decide whether `principal` may perform `action` on `resource`.

    :param policy: the access policy; the configured default policy if ``None``
    :type policy: :py:class:`AccessPolicy` or list of rule mappings
    :rtype: :py:class:`Decision`
    """
    if policy is None:
        policy = AccessPolicy.from_config()
    elif not isinstance(policy, AccessPolicy):
        policy = AccessPolicy(policy)
    _decision = policy.decide(principal, action, resource)
    if not _decision.allowed:
        logger.warning("Denied '%s' on '%s' for '%s': %s", action, resource, principal.subject, _decision.reason)
    return _decision
