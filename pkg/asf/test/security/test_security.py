import datetime
import json
import os
import unittest

from asf.security import (Principal, GUEST, MEMBER, ADMIN, AccessPolicy, AccessRule, authorize, Guard, AuditLog,
                          TokenRecord, TokenStore, AuthenticationError, SecondFactorError, AccessDeniedError,
                          AuditPersistenceError, PolicyError, elevate_loa, mask_document, bearer_token, MASK,
                          audit_append)
from asf.test.tools import FixedClock, TempDirTestMixin

_NOW = datetime.datetime(2022, 1, 1, 0, 0, 0)


class TestPolicy(unittest.TestCase):

    def setUp(self):
        self._policy = AccessPolicy.from_config()

    def test_guard_session(self):
        _guard = Guard(policy=self._policy, audit_log=AuditLog(clock=FixedClock()), enabled=True)
        _session = [
            (Principal('visitor', [GUEST]), 'read', 'public/entries', True),
            (Principal('visitor', [GUEST]), 'create', 'private/entries', False),
            (Principal('alice', [MEMBER], 'low'), 'create', 'public/entries', False),
            (Principal('root', [ADMIN], 'substantial'), 'create', 'private/entries', True),
        ]
        for _principal, _action, _resource, _allowed in _session:
            self.assertEqual(_guard.check(_principal, _action, _resource).allowed, _allowed)
        _records = _guard.audit_log.records()
        self.assertEqual([_r.sequence for _r in _records], [1, 2, 3, 4])
        self.assertEqual([_r.outcome for _r in _records], ['allow', 'deny', 'deny', 'allow'])
        self.assertEqual(_records[2].subject, 'alice')

    def test_roles_are_ranked(self):
        self.assertTrue(authorize(Principal('root', [ADMIN]), 'read', 'private/entries', self._policy))
        self.assertFalse(authorize(Principal('visitor', [GUEST]), 'read', 'private/entries', self._policy))

    def test_default_deny(self):
        _decision = authorize(Principal('root', [ADMIN], 'high'), 'teleport', 'public/entries', self._policy)
        self.assertFalse(_decision.allowed)
        self.assertIsNone(_decision.rule)

    def test_level_of_assurance(self):
        _decision = authorize(Principal('alice', [MEMBER], 'low'), 'update', 'public/entries/x', self._policy)
        self.assertEqual(_decision.reason, "level of assurance 'substantial' required")

    def test_first_match_decides(self):
        _policy = AccessPolicy([dict(action='read', resource='public/*', role='admin'),
                                dict(action='*', resource='*', role='guest')])
        self.assertFalse(authorize(Principal('visitor', [GUEST]), 'read', 'public/entries', _policy))
        self.assertTrue(authorize(Principal('visitor', [GUEST]), 'create', 'public/entries', _policy))

    def test_invalid_rule(self):
        with self.assertRaises(PolicyError):
            AccessRule('read', '*', 'superuser')
        with self.assertRaises(ValueError):
            Principal('nobody', [])


class TestGuard(unittest.TestCase):

    def setUp(self):
        self._tokens = TokenStore([TokenRecord('tok-alice', 'alice', [MEMBER], 'substantial')])
        self._guard = Guard(token_store=self._tokens, policy=AccessPolicy.from_config(), audit_log=AuditLog(),
                            enabled=True)

    def test_run_writes_one_record_per_outcome(self):
        _alice = self._guard.authenticate('tok-alice')
        self.assertEqual(self._guard.run(_alice, 'create', 'public/entries', lambda: 'created'), 'created')
        with self.assertRaises(AccessDeniedError):
            self._guard.run(_alice, 'delete', 'public/entries/x', lambda: None)
        with self.assertRaises(ZeroDivisionError):
            self._guard.run(_alice, 'update', 'public/entries/x', lambda: 1 / 0)
        self.assertEqual([_r.outcome for _r in self._guard.audit_log.records()], ['allow', 'deny', 'error'])

    def test_failed_authentication_is_audited(self):
        with self.assertRaises(AuthenticationError):
            self._guard.authenticate('forged', action='create', resource='public/entries')
        _record = self._guard.audit_log.records()[-1]
        self.assertEqual((_record.subject, _record.outcome), ('unknown', 'deny'))

    def test_disabled_guard_allows(self):
        _guard = Guard(policy=AccessPolicy.from_config(), audit_log=AuditLog(), enabled=False)
        self.assertTrue(_guard.check(Principal('visitor', [GUEST]), 'delete', 'private/entries/x').allowed)
        self.assertEqual(len(_guard.audit_log), 1)


class TestTokens(TempDirTestMixin, unittest.TestCase):

    def setUp(self):
        super(TestTokens, self).setUp()
        self._store = TokenStore([
            TokenRecord('tok-alice', 'alice', [MEMBER], 'substantial'),
            TokenRecord('tok-old', 'old', [MEMBER], expires=_NOW - datetime.timedelta(days=1)),
            TokenRecord('tok-root', 'root', [ADMIN], 'high', last_used=_NOW - datetime.timedelta(days=2)),
        ])

    def test_authenticate(self):
        _principal = self._store.authenticate('tok-alice', now=_NOW)
        self.assertEqual((_principal.subject, _principal.loa, _principal.token_id), ('alice', 'substantial', 'tok-alice'))
        self.assertTrue(_principal.has_role(GUEST))
        self.assertFalse(_principal.has_role(ADMIN))

    def test_unknown_and_expired_tokens(self):
        with self.assertRaises(AuthenticationError):
            self._store.authenticate('tok-nobody', now=_NOW)
        with self.assertRaises(AuthenticationError):
            self._store.authenticate('tok-old', now=_NOW)
        with self.assertRaises(AuthenticationError):
            self._store.authenticate(None, now=_NOW)

    def test_prune_inactive(self):
        self._store.authenticate('tok-alice', now=_NOW)
        self.assertEqual(self._store.prune_inactive(30, now=_NOW), ['old'])
        self.assertEqual(self._store.prune_inactive(1, now=_NOW), ['root'])
        self.assertEqual([_r.subject for _r in self._store.records()], ['alice'])

    def test_duplicate_token(self):
        with self.assertRaises(ValueError):
            TokenStore([TokenRecord('t', 'a', [GUEST]), TokenRecord('t', 'b', [GUEST])])

    def test_guest_token_has_low_loa(self):
        with self.assertRaises(ValueError):
            TokenRecord('t', 'g', [GUEST], 'high')
        self.assertEqual(TokenRecord('t', 'g', [GUEST]).loa, 'low')
        self.assertEqual(TokenRecord('t', 'm', [GUEST, MEMBER], 'high').loa, 'high')

    def test_file_round_trip(self):
        _filename = os.path.join(self._tmp_dir, 'tokens.json')
        self._store.to_file(_filename)
        _reopened = TokenStore.from_file(_filename)
        self.assertEqual(_reopened.records(), self._store.records())


class TestHelpers(unittest.TestCase):

    def test_elevate_loa(self):
        _alice = Principal('alice', [MEMBER], 'low')
        self.assertEqual(elevate_loa(_alice, 'sesame', secret='sesame').loa, 'substantial')
        self.assertEqual(elevate_loa(_alice.with_loa('high'), 'sesame', secret='sesame').loa, 'high')
        with self.assertRaises(SecondFactorError):
            elevate_loa(_alice, 'guess', secret='sesame')

    def test_bearer_token(self):
        self.assertEqual(bearer_token('Bearer tok-alice'), 'tok-alice')
        self.assertEqual(bearer_token('bearer  tok-alice '), 'tok-alice')
        self.assertIsNone(bearer_token('Basic YWxpY2U6c2VjcmV0'))
        self.assertIsNone(bearer_token(None))

    def test_mask_document(self):
        _document = dict(name='eq-forecast', author='Jane Doe', sla={'cost': 2.0})
        _masked = mask_document(_document, Principal('visitor', [GUEST]))
        self.assertEqual(_masked, dict(name='eq-forecast', author=MASK, sla=MASK))
        self.assertEqual(mask_document(_document, Principal('alice', [MEMBER])), _document)
        self.assertEqual(_document['author'], 'Jane Doe')


class TestAuditLog(TempDirTestMixin, unittest.TestCase):

    def test_file_is_appended_and_reloaded(self):
        _filename = os.path.join(self._tmp_dir, 'audit.log')
        _log = AuditLog(_filename, clock=FixedClock())
        _log.append('alice', 'create', 'public/entries', 'allow')
        _log.append('visitor', 'create', 'public/entries', 'deny')
        with open(_filename) as _f:
            _lines = [json.loads(_line) for _line in _f]
        self.assertEqual([_l['sequence'] for _l in _lines], [1, 2])
        _reopened = AuditLog(_filename)
        self.assertEqual(_reopened.records(), _log.records())
        self.assertEqual(_reopened.append('root', 'admin.tokens', '*', 'allow').sequence, 3)

    def test_audit_append(self):
        _log = AuditLog(clock=FixedClock())
        _first = audit_append(_log, 'alice', 'read', 'public/entries', 'allow')
        _second = audit_append(_log, 'visitor', 'delete', 'public/entries/x', 'deny')
        self.assertEqual((_first.sequence, _second.sequence), (1, 2))
        self.assertEqual(_log.records(), [_first, _second])
        self.assertEqual(_second.timestamp, _first.timestamp)

    def test_unknown_outcome(self):
        with self.assertRaises(ValueError):
            AuditLog().append('alice', 'read', 'public/entries', 'maybe')

    def test_unwritable_log(self):
        _log = AuditLog(os.path.join(self._tmp_dir, 'missing', 'audit.log'))
        with self.assertRaises(AuditPersistenceError):
            _log.append('alice', 'read', 'public/entries', 'allow')
        self.assertEqual(len(_log), 0)

    def test_corrupt_log(self):
        _filename = os.path.join(self._tmp_dir, 'audit.log')
        with open(_filename, 'w') as _f:
            _f.write('{not json\n')
        with self.assertRaises(AuditPersistenceError):
            AuditLog(_filename)
