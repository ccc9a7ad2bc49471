"""
Bearer-token authentication, second-factor elevation, guarded operations and field masking.

Tokens are opaque strings provisioned in a JSON token file (list of
``{token, subject, roles, loa[, expires][, last_used]}``).
"""

import datetime
import hmac
import logging
import threading

from collections import namedtuple

import six

from ..config import kc
from ..tools import utc_now
from .audit import AuditLog, audit_append
from .policy import AccessPolicy, Decision
from .principal import Principal, SecurityError, GUEST, LOA_LEVELS, loa_rank, role_rank

__all__ = ['TokenRecord', 'TokenStore', 'Guard', 'AuthenticationError', 'SecondFactorError',
           'AccessDeniedError', 'authenticate', 'elevate_loa', 'mask_document', 'bearer_token',
           'MASK']

logger = logging.getLogger(__name__)

MASK = '***'


class AuthenticationError(SecurityError):
    pass


class SecondFactorError(SecurityError):
    pass


class AccessDeniedError(SecurityError):
    def __init__(self, decision):
        self.decision = decision
        super(AccessDeniedError, self).__init__("Access denied: {}".format(decision.reason))


class TokenRecord(namedtuple('TokenRecord', ('token', 'subject', 'roles', 'loa', 'expires', 'last_used'))):
    __slots__ = ()

    def __new__(cls, token, subject, roles, loa='low', expires=None, last_used=None):
        if not isinstance(token, six.string_types) or not token:
            raise ValueError("token must be a nonempty string")
        _principal = Principal(subject, roles, loa)  # validates roles and loa
        if _principal.rank == role_rank(GUEST) and loa != LOA_LEVELS[0]:
            raise ValueError("Guest token of '{}' must have level of assurance '{}', not '{}'".format(
                subject, LOA_LEVELS[0], loa))
        return super(TokenRecord, cls).__new__(cls, token, subject, frozenset(roles), loa, expires, last_used)

    def principal(self):
        return Principal(self.subject, self.roles, self.loa, token_id=self.token)


class TokenStore(object):
    """The provisioned bearer tokens, keyed by token string."""

    def __init__(self, records=(), filename=None):
        self._records = dict()
        for _record in records:
            if _record.token in self._records:
                raise ValueError("Token of subject '{}' provisioned twice!".format(_record.subject))
            self._records[_record.token] = _record
        self._filename = filename
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._records)

    @classmethod
    def from_file(cls, filename):
        from ..representation import read_file
        _store = read_file('tokens', filename, 'json')
        _store._filename = filename
        return _store

    def to_file(self, filename=None):
        from ..representation import write_file
        write_file(self, 'tokens', filename or self._filename, 'json')

    def records(self):
        with self._lock:
            return sorted(self._records.values(), key=lambda _r: (_r.subject, _r.token))

    def add(self, record):
        with self._lock:
            self._records[record.token] = record

    def authenticate(self, token, now=None):
        """
        Resolve a bearer token to its principal.

        :raise AuthenticationError: for an unknown or expired token
        """
        _now = now or utc_now()
        with self._lock:
            _record = self._records.get(token) if isinstance(token, six.string_types) else None
            if _record is None:
                raise AuthenticationError("Unknown token")
            if _record.expires is not None and _now >= _record.expires:
                raise AuthenticationError("Token of subject '{}' expired at {}".format(_record.subject, _record.expires))
            self._records[token] = _record._replace(last_used=_now)
        return _record.principal()

    def prune_inactive(self, days, now=None):
        """
        Delete the tokens not used within the last `days` days. Tokens never used count as
        inactive. Returns the subjects removed.
        """
        _now = now or utc_now()
        _limit = _now - datetime.timedelta(days=days)
        with self._lock:
            _stale = [_t for _t, _r in six.iteritems(self._records) if _r.last_used is None or _r.last_used < _limit]
            _removed = sorted(self._records.pop(_t).subject for _t in _stale)
        if _removed:
            logger.info("Removed %d inactive token(s): %s", len(_removed), ', '.join(_removed))
        return _removed


def authenticate(token, token_store, now=None):
    return token_store.authenticate(token, now=now)


def elevate_loa(principal, second_factor, secret=None):
    """
    Raise the level of assurance of `principal` by one level (at most to ``high``) after
    checking `second_factor` against the configured shared secret.

    :raise SecondFactorError: if the factor does not match
    """
    _secret = secret if secret is not None else kc('security', 'mfa_secret')
    if not isinstance(second_factor, six.string_types) or \
            not hmac.compare_digest(second_factor.encode('utf-8'), str(_secret).encode('utf-8')):
        raise SecondFactorError("Second factor rejected for subject '{}'".format(principal.subject))
    _index = min(loa_rank(principal.loa) + 1, len(LOA_LEVELS) - 1)
    return principal.with_loa(LOA_LEVELS[_index])


def bearer_token(header_value):
    """extract the token from an ``Authorization: Bearer <token>`` header value"""
    if not header_value:
        return None
    _parts = header_value.split(None, 1)
    if len(_parts) != 2 or _parts[0].lower() != 'bearer':
        return None
    return _parts[1].strip()


def mask_document(document, principal, masked_fields=None):
    """
    Return a copy of an entry document with the fields configured for the principal's role
    replaced by ``***``.
    """
    if masked_fields is None:
        masked_fields = kc('security', 'masked_fields')
    _fields = set()
    for _role, _role_fields in six.iteritems(masked_fields or {}):
        if principal.rank <= role_rank(_role):
            _fields.update(_role_fields)
    return dict((_k, MASK if _k in _fields else _v) for _k, _v in six.iteritems(document))


class Guard(object):
    """
    Couples authentication and authorization with the audit trail: every guarded operation
    writes exactly one audit record (``allow``, ``deny`` or ``error``).
    """

    def __init__(self, token_store=None, policy=None, audit_log=None, enabled=None):
        self.token_store = token_store if token_store is not None else TokenStore()
        self.policy = policy if policy is not None else AccessPolicy.from_config()
        self.audit_log = audit_log if audit_log is not None else AuditLog()
        self.enabled = kc('security', 'enabled') if enabled is None else enabled

    def authenticate(self, token, action='authenticate', resource='-'):
        try:
            return self.token_store.authenticate(token)
        except AuthenticationError:
            audit_append(self.audit_log, subject='unknown', action=action, resource=resource, outcome='deny')
            raise

    def decide(self, principal, action, resource):
        if not self.enabled:
            return Decision(True, "security disabled", None)
        return self.policy.decide(principal, action, resource)

    def check(self, principal, action, resource):
        """authorize and audit; returns the decision"""
        _decision = self.decide(principal, action, resource)
        audit_append(self.audit_log, subject=principal.subject, action=action, resource=resource,
                     outcome=_decision.outcome)
        if not _decision.allowed:
            logger.warning("Denied '%s' on '%s' for '%s': %s", action, resource, principal.subject, _decision.reason)
        return _decision

    def run(self, principal, action, resource, operation, *args, **kwargs):
        """
        Perform `operation` if `principal` is authorized.

        :raise AccessDeniedError: if the policy denies the action
        """
        _decision = self.decide(principal, action, resource)
        if not _decision.allowed:
            audit_append(self.audit_log, subject=principal.subject, action=action, resource=resource, outcome='deny')
            logger.warning("Denied '%s' on '%s' for '%s': %s", action, resource, principal.subject, _decision.reason)
            raise AccessDeniedError(_decision)
        try:
            _result = operation(*args, **kwargs)
        except Exception:
            audit_append(self.audit_log, subject=principal.subject, action=action, resource=resource, outcome='error')
            raise
        audit_append(self.audit_log, subject=principal.subject, action=action, resource=resource, outcome='allow')
        return _result
