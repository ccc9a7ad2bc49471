import json
import os
import unittest

from asf.api import ServiceConfig, ServiceContext
from asf.api.service import create_app, status_for_error
from asf.registry import RegistryNotFoundError
from asf.security import TokenRecord, AuthenticationError, MASK, MEMBER, ADMIN, GUEST
from asf.test.tools import make_entry, ENTRY_ID, FakeProber, FakeProviderClock, TempDirTestMixin


TEST_WORKFLOW_YAML = """
name: pipeline
jobs:
  - {name: prepare, kind: noop}
  - {name: train, kind: noop, depends_on: [prepare]}
"""


def _bearer(token):
    return {'Authorization': 'Bearer {}'.format(token)}


class ServiceTestBase(TempDirTestMixin, unittest.TestCase):

    VISIBILITY = 'public'

    def setUp(self):
        super(ServiceTestBase, self).setUp()
        _config = ServiceConfig(host='127.0.0.1', port=8765,
                                store_file=os.path.join(self._tmp_dir, 'store.json'),
                                token_file=os.path.join(self._tmp_dir, 'tokens.json'),
                                audit_log=os.path.join(self._tmp_dir, 'audit.log'),
                                visibility=self.VISIBILITY)
        self._context = ServiceContext(_config, prober=FakeProber(), clock=FakeProviderClock())
        self._context.token_store.add(TokenRecord('tok-guest', 'visitor', [GUEST]))
        self._context.token_store.add(TokenRecord('tok-alice', 'alice', [MEMBER], 'substantial'))
        self._context.token_store.add(TokenRecord('tok-bob', 'bob', [MEMBER], 'low'))
        self._context.token_store.add(TokenRecord('tok-root', 'root', [ADMIN], 'high'))
        self._client = create_app(context=self._context).test_client()

    def _post_entry(self, document=None, token='tok-alice'):
        return self._client.post('/entries', data=json.dumps(document or make_entry().to_document()),
                                 content_type='application/json', headers=_bearer(token))


class TestRegistryRoutes(ServiceTestBase):

    def test_create_without_token(self):
        _response = self._client.post('/entries', data=json.dumps(make_entry().to_document()), content_type='application/json')
        self.assertEqual(_response.status_code, 401)
        _record = self._context.audit_log.records()[-1]
        self.assertEqual((_record.action, _record.outcome), ('create', 'deny'))
        self.assertEqual(len(self._context.store), 0)

    def test_create_needs_substantial_assurance(self):
        self.assertEqual(self._post_entry(token='tok-bob').status_code, 403)
        _response = self._client.post('/entries', data=json.dumps(make_entry().to_document()),
                                      content_type='application/json',
                                      headers=dict(_bearer('tok-bob'), **{'X-Second-Factor': 'change-me'}))
        self.assertEqual(_response.status_code, 201)

    def test_create_and_read(self):
        _response = self._post_entry()
        self.assertEqual(_response.status_code, 201)
        self.assertEqual(_response.get_json()['id'], ENTRY_ID)
        self.assertEqual(self._context.audit_log.records()[-1].outcome, 'allow')

        _guest = self._client.get('/entries/{}'.format(ENTRY_ID))
        self.assertEqual(_guest.status_code, 200)
        self.assertEqual(_guest.get_json()['author'], MASK)
        self.assertEqual(_guest.get_json()['name'], 'eq-forecast')
        _member = self._client.get('/entries/{}'.format(ENTRY_ID), headers=_bearer('tok-alice'))
        self.assertEqual(_member.get_json()['author'], 'Jane Doe')

    def test_unknown_entry(self):
        _response = self._client.get('/entries/{}'.format(ENTRY_ID), headers=_bearer('tok-alice'))
        self.assertEqual(_response.status_code, 404)
        self.assertIn('error', _response.get_json())

    def test_duplicate_entry(self):
        self._post_entry()
        self.assertEqual(self._post_entry().status_code, 409)

    def test_invalid_entry(self):
        _document = make_entry().to_document()
        del _document['title']
        _response = self._post_entry(_document)
        self.assertEqual(_response.status_code, 422)
        self.assertIn("title required", _response.get_json()['report']['violations'])

    def test_malformed_body(self):
        _response = self._client.post('/entries', data='{not json', content_type='application/json',
                                      headers=_bearer('tok-alice'))
        self.assertEqual(_response.status_code, 400)
        self.assertEqual(len(self._context.audit_log), 0)

    def test_update_and_remove(self):
        self._post_entry()
        _document = make_entry(version='2.0.0').to_document()
        _response = self._client.put('/entries/{}'.format(ENTRY_ID), data=json.dumps(_document),
                                     content_type='application/json', headers=_bearer('tok-alice'))
        self.assertEqual(_response.get_json()['version'], '2.0.0')
        self.assertEqual(self._client.delete('/entries/{}'.format(ENTRY_ID),
                                             headers=_bearer('tok-alice')).status_code, 403)
        _response = self._client.delete('/entries/{}'.format(ENTRY_ID), headers=_bearer('tok-root'))
        self.assertEqual(_response.get_json(), dict(id=ENTRY_ID, removed=True))
        self.assertEqual(len(self._context.store), 0)

    def test_search_and_heartbeat(self):
        self._post_entry()
        _response = self._client.get('/search?keyword=nowcasting&tag=earthquake')
        self.assertEqual([_e['id'] for _e in _response.get_json()], [ENTRY_ID])
        self.assertEqual(self._client.get('/search?tag=nlp').get_json(), [])
        _response = self._client.get('/entries/{}/heartbeat'.format(ENTRY_ID), headers=_bearer('tok-bob'))
        self.assertEqual(_response.get_json()['state'], 'alive')

    def test_catalog_and_fair_audit(self):
        self._post_entry()
        _catalog = self._client.get('/catalog').get_json()
        self.assertEqual([_d['id'] for _d in _catalog], [ENTRY_ID])
        self.assertNotIn('heartbeat', _catalog[0])
        _response = self._client.post('/fair/audit', data=json.dumps(dict(entry=ENTRY_ID)),
                                      content_type='application/json')
        self.assertEqual(_response.get_json()['overall'], 'pass')

    def test_audit_trail_is_admin_only(self):
        self.assertEqual(self._client.get('/audit', headers=_bearer('tok-alice')).status_code, 403)
        _response = self._client.get('/audit?tail=1', headers=_bearer('tok-root'))
        self.assertEqual(_response.status_code, 200)
        self.assertEqual([_r['outcome'] for _r in _response.get_json()], ['deny'])


class TestOperationRoutes(ServiceTestBase):

    def test_translate(self):
        _response = self._client.post('/translate', data=json.dumps({'text': 'hello world', 'from': 'en', 'to': 'de'}),
                                      content_type='application/json', headers=_bearer('tok-bob'))
        self.assertEqual(_response.status_code, 200)
        _text = _response.get_data(as_text=True)
        self.assertTrue(_text.startswith('{"date": "10/05/2021 14:33:07", "input": "hello world"'))
        self.assertEqual(json.loads(_text)['output'], 'Hallo Welt')

    def test_translate_unknown_pair(self):
        _response = self._client.post('/translate', data=json.dumps({'text': 'hello world', 'from': 'en', 'to': 'ja'}),
                                      content_type='application/json', headers=_bearer('tok-bob'))
        self.assertEqual(_response.status_code, 422)

    def test_workflow_run_and_status(self):
        _response = self._client.post('/workflows', data=TEST_WORKFLOW_YAML, content_type='application/x-yaml',
                                      headers=_bearer('tok-bob'))
        self.assertEqual(_response.status_code, 202)
        _run_id = _response.get_json()['run_id']
        self.assertTrue(self._context.workflows.get(_run_id).wait(30))
        _status = self._client.get('/workflows/{}/status'.format(_run_id), headers=_bearer('tok-bob')).get_json()
        self.assertEqual(_status['states'], dict(prepare='done', train='done'))
        self.assertEqual(_status['progress'], 1.0)
        self.assertEqual(self._client.get('/workflows/nope/status', headers=_bearer('tok-bob')).status_code, 404)

    def test_invalid_workflow(self):
        _response = self._client.post('/workflows', data="name: x\njobs:\n  - {name: a, kind: noop, depends_on: [a]}\n",
                                      headers=_bearer('tok-bob'))
        self.assertEqual(_response.status_code, 422)

    def test_experiment_generation(self):
        _body = dict(config=dict(name='sweep', experiments=dict(epochs=[1, 2])),
                     template="#!/bin/sh\necho {epochs}\n", outdir=os.path.join(self._tmp_dir, 'runs'))
        _response = self._client.post('/ee/generate', data=json.dumps(_body), content_type='application/json',
                                      headers=_bearer('tok-bob'))
        self.assertEqual(_response.status_code, 201)
        self.assertEqual(_response.get_json()['message'], "2 experiments generated")
        _again = self._client.post('/ee/generate', data=json.dumps(_body), content_type='application/json',
                                   headers=_bearer('tok-bob'))
        self.assertEqual(_again.status_code, 409)


class TestPrivateRegistry(ServiceTestBase):

    VISIBILITY = 'private'

    def test_token_required(self):
        _response = self._client.get('/entries')
        self.assertEqual(_response.status_code, 401)
        _record = self._context.audit_log.records()[-1]
        self.assertEqual((_record.subject, _record.outcome), ('unknown', 'deny'))

    def test_guest_cannot_read(self):
        self.assertEqual(self._client.get('/entries', headers=_bearer('tok-guest')).status_code, 403)
        self.assertEqual(self._client.get('/entries', headers=_bearer('tok-bob')).get_json(), [])


class TestErrorStatus(unittest.TestCase):

    def test_mapping(self):
        self.assertEqual(status_for_error(AuthenticationError("x")), 401)
        self.assertEqual(status_for_error(RegistryNotFoundError("x")), 404)
        self.assertEqual(status_for_error(RuntimeError("x")), 500)
