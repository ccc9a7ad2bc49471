import datetime
import unittest

from asf.core import (ENTRY_ATTRIBUTES, ROLES, REQUIRED, OPTIONAL, NOT_APPLICABLE, RoleProfile, RoleProfileError,
                      validate_entry, is_present, role_for_entry_class, HeartbeatStatus,
                      CATALOG_PROVIDER, SERVICE_PROVIDER, LIBRARY_PROVIDER)
from asf.test.tools import make_entry


class TestValidationMatrix(unittest.TestCase):

    def setUp(self):
        self._entry = make_entry()

    def test_full_entry_valid_for_every_role(self):
        for _role in ROLES:
            _report = validate_entry(self._entry, _role)
            self.assertTrue(_report.valid, msg="{}: {}".format(_role, _report.violations))

    def test_sweep_remove_each_attribute(self):
        for _role in ROLES:
            _profile = RoleProfile.builtin(_role)
            for _attribute in ENTRY_ATTRIBUTES:
                _report = validate_entry(self._entry._replace(**{_attribute: None}), _role)
                if _profile.requirement(_attribute) == REQUIRED:
                    self.assertFalse(_report.valid, msg="{} / {}".format(_role, _attribute))
                    self.assertIn("{} required".format(_attribute), _report.violations)
                else:
                    self.assertTrue(_report.valid, msg="{} / {}: {}".format(_role, _attribute, _report.violations))

    def test_not_applicable_only_warns(self):
        with self.assertLogs('asf.core.profiles', level='WARNING') as _logs:
            _report = validate_entry(self._entry, LIBRARY_PROVIDER)
        self.assertTrue(any("endpoint not applicable" in _line for _line in _logs.output))
        self.assertTrue(_report.valid)
        self.assertIn("endpoint not applicable for library-provider", _report.warnings)
        self.assertIn("heartbeat not applicable for library-provider", _report.warnings)

    def test_blank_string_is_absent(self):
        _report = validate_entry(self._entry._replace(title='   '), SERVICE_PROVIDER)
        self.assertFalse(_report.valid)
        self.assertEqual(list(_report.violations), ["title required"])

    def test_false_is_present(self):
        self.assertTrue(validate_entry(self._entry._replace(public=False), CATALOG_PROVIDER).valid)
        self.assertTrue(is_present(False))
        self.assertFalse(is_present([]))
        self.assertFalse(is_present(None))

    def test_malformed_values(self):
        _cases = dict(
            id='not-a-uuid',
            endpoint='no url',
            public='yes',
            caching_interval=-5,
            tags=['NLP'],
            entry_class='appliance',
            heartbeat=HeartbeatStatus('sleeping', None),
        )
        for _attribute, _value in _cases.items():
            _report = validate_entry(self._entry._replace(**{_attribute: _value}), SERVICE_PROVIDER)
            self.assertFalse(_report.valid, msg=_attribute)
            self.assertTrue(any(_v.startswith(_attribute + ':') for _v in _report.violations), msg=_attribute)

    def test_created_after_modified(self):
        _entry = self._entry._replace(created=self._entry.modified + datetime.timedelta(days=1))
        _report = validate_entry(_entry, SERVICE_PROVIDER)
        self.assertFalse(_report.valid)
        self.assertIn("created: must not be later than modified", _report.violations)

    def test_duplicate_tags(self):
        _report = validate_entry(self._entry._replace(tags=['nlp', 'nlp']), SERVICE_PROVIDER)
        self.assertIn("tags: tags must be unique", _report.violations)


class TestRoleProfile(unittest.TestCase):

    def test_builtin_profiles_cover_all_attributes(self):
        for _role in ROLES:
            _profile = RoleProfile.builtin(_role)
            _levels = [_profile.requirement(_a) for _a in ENTRY_ATTRIBUTES]
            self.assertTrue(all(_l in (REQUIRED, OPTIONAL, NOT_APPLICABLE) for _l in _levels))

    def test_library_endpoint_not_applicable(self):
        self.assertEqual(RoleProfile.builtin(LIBRARY_PROVIDER).requirement('endpoint'), NOT_APPLICABLE)
        self.assertEqual(RoleProfile.builtin(CATALOG_PROVIDER).requirement('heartbeat'), NOT_APPLICABLE)

    def test_unknown_role_raises(self):
        with self.assertRaises(RoleProfileError):
            RoleProfile.builtin('consumer')

    def test_incomplete_profile_raises(self):
        with self.assertRaises(RoleProfileError):
            RoleProfile('partial', dict(id=REQUIRED))

    def test_role_for_entry_class(self):
        self.assertEqual(role_for_entry_class('library'), LIBRARY_PROVIDER)
        self.assertEqual(role_for_entry_class('instantiated-service'), SERVICE_PROVIDER)
