"""
The operations shared by the REST service and the command line interface.

Both surfaces resolve a principal and call one :py:class:`ServiceContext` method per route or
subcommand; every method is guarded (authorized and audited exactly once) and returns a
JSON-serializable document.
"""

import getpass
import logging
import os

import six

from ..config import kc
from ..core.entry import ServiceEntry
from ..core.profiles import validate_entry
from ..experiment import ExperimentConfig, generate, load_runset, submit
from ..fair.audit import audit as fair_audit, AuditContext
from ..federation import federate, federated_search, export_catalog
from ..provider import TranslationRequest, bindings_from_config, translate, ProviderError
from ..registry import RegistryStore, RegistryError, visible_to, RegistryNotFoundError
from ..security import (Guard, TokenStore, AuditLog, AccessPolicy, Principal, ADMIN,
                        elevate_loa, mask_document, SecondFactorError)
from ..workflow import WorkflowManager, parse_workflow
from .config import ServiceConfig

__all__ = ['ServiceContext', 'cli_principal']

logger = logging.getLogger(__name__)

LOCAL_LABEL = 'local'


def cli_principal():
    """the operator running the command line interface: full rights, audited as ``cli:<login>``"""
    try:
        _login = getpass.getuser()
    except Exception:
        _login = 'unknown'
    return Principal("cli:{}".format(_login), [ADMIN], 'high')


def _read_registry_dump(filename):
    from ..representation import read_file
    return RegistryStore(entries=read_file('registry', filename, 'json'))


class ServiceContext(object):
    """
    Store, security guard, workflow manager and provider bindings of one service instance.

    :param config: :py:class:`~asf.api.config.ServiceConfig`; built from the configuration if omitted
    :param prober: heartbeat prober passed to the registry (HTTP GET by default)
    """

    def __init__(self, config=None, prober=None, executors=None, bindings=None, clock=None):
        self.config = config if config is not None else ServiceConfig.from_config()
        self.store = RegistryStore.from_file(self.config.store_file, visibility=self.config.visibility,
                                             base_url=self.config.base_url)
        if os.path.exists(self.config.token_file):
            self.token_store = TokenStore.from_file(self.config.token_file)
        else:
            self.token_store = TokenStore(filename=self.config.token_file)
        self.audit_log = AuditLog(self.config.audit_log)
        self.guard = Guard(self.token_store, AccessPolicy.from_config(), self.audit_log)
        self._executors = executors
        self.workflows = WorkflowManager(executors=executors, max_parallel=self.config.max_parallel)
        self.bindings = bindings if bindings is not None else bindings_from_config()
        self.prober = prober
        self.clock = clock

    # -- principals

    def resource(self, collection, item=None):
        _resource = "{}/{}".format(self.store.visibility, collection)
        return _resource if item is None else "{}/{}".format(_resource, item)

    def principal(self, token, second_factor=None, action='authenticate', resource='-'):
        """
        Resolve the presented credentials. Without a token, a public registry answers as the
        anonymous guest; a private one rejects the request (audited).
        """
        if token is None and self.store.visibility == 'public':
            _principal = Principal.anonymous()
        else:
            _principal = self.guard.authenticate(token, action=action, resource=resource)
        if second_factor is not None:
            try:
                _principal = elevate_loa(_principal, second_factor)
            except SecondFactorError:
                self.audit_log.append(subject=_principal.subject, action=action, resource=resource, outcome='deny')
                raise
        return _principal

    def _mask(self, document, principal):
        return mask_document(document, principal)

    def _entry_document(self, entry, principal):
        return self._mask(entry.to_document(), principal)

    # -- registry

    def list_entries(self, principal):
        return self.guard.run(principal, 'read', self.resource('entries'), lambda: [
            self._entry_document(_e, principal) for _e in self.store.search(principal=principal)])

    def add_entry(self, principal, document):
        def _add():
            _id = self.store.register(ServiceEntry.from_document(document))
            return self.store.get(_id).to_document()
        return self.guard.run(principal, 'create', self.resource('entries'), _add)

    def get_entry(self, principal, entry_id):
        def _get():
            _entry = self.store.get(entry_id)
            if not visible_to(_entry, principal):
                raise RegistryNotFoundError("No entry with id '{}'".format(entry_id))
            return self._entry_document(_entry, principal)
        return self.guard.run(principal, 'read', self.resource('entries', entry_id), _get)

    def update_entry(self, principal, entry_id, document):
        def _update():
            _document = dict(document)
            if _document.setdefault('id', entry_id) != entry_id:
                raise RegistryError("Entry id '{}' does not match '{}'".format(_document['id'], entry_id))
            return self.store.update(ServiceEntry.from_document(_document)).to_document()
        return self.guard.run(principal, 'update', self.resource('entries', entry_id), _update)

    def remove_entry(self, principal, entry_id):
        def _remove():
            self.store.remove(entry_id)
            return dict(id=entry_id, removed=True)
        return self.guard.run(principal, 'delete', self.resource('entries', entry_id), _remove)

    def heartbeat(self, principal, entry_id):
        return self.guard.run(principal, 'heartbeat', self.resource('entries', entry_id),
                              lambda: self.store.check_heartbeat(entry_id, prober=self.prober).to_document())

    def search(self, principal, query=None):
        return self.guard.run(principal, 'read', self.resource('search'), lambda: [
            self._entry_document(_e, principal) for _e in self.store.search(query, principal=principal)])

    def validate(self, principal, document, role):
        """role-profile validation of an entry document (nothing is stored)"""
        return self.guard.run(principal, 'read', self.resource('validate'),
                              lambda: validate_entry(ServiceEntry.from_document(document), role).to_document())

    # -- catalog, federation and FAIR audit

    def catalog(self, principal):
        return self.guard.run(principal, 'read', self.resource('catalog'),
                              lambda: export_catalog(self.store, principal=principal))

    def federation_members(self, extra_members=None):
        """this registry (label ``local``), the configured members and the given dump files"""
        _members = [(LOCAL_LABEL, self.store)]
        _files = dict(kc('registry', 'federation_members') or {})
        _files.update(extra_members or {})
        for _label in sorted(_files):
            _members.append((_label, _read_registry_dump(_files[_label])))
        return _members

    def federation_search(self, principal, body=None):
        """
        :param body: ``{"query": {...}, "members": {label: registry dump}, "duplicate_policy": ...}``
        """
        _body = dict(body or {})

        def _search():
            from ..representation import get_reader
            _members = self.federation_members()
            for _label, _dump in sorted(six.iteritems(_body.get('members') or {})):
                _members.append((_label, RegistryStore(entries=get_reader('registry', 'json').make_object(_dump))))
            _kwargs = dict()
            if 'duplicate_policy' in _body:
                _kwargs['duplicate_policy'] = _body['duplicate_policy']
            _view = federate(_members, **_kwargs)
            return [dict(origin=_origin, entry=self._entry_document(_entry, principal))
                    for _origin, _entry in federated_search(_view, _body.get('query'), principal=principal)]
        return self.guard.run(principal, 'read', self.resource('federation'), _search)

    def fair_audit(self, principal, body):
        """
        :param body: ``{"entry": <entry document or id>, "context": {...}}``
        """
        def _audit():
            _entry = body.get('entry')
            if isinstance(_entry, six.string_types):
                _entry = self.store.get(_entry)
            else:
                _entry = ServiceEntry.from_document(_entry)
            return fair_audit(_entry, AuditContext.from_document(body.get('context'))).to_document()
        return self.guard.run(principal, 'read', self.resource('fair'), _audit)

    # -- workflows and experiments

    def configure_workflows(self, max_parallel=None, event_log=None):
        """replace the workflow manager; runs of the previous manager are no longer addressable"""
        if max_parallel is None and event_log is None:
            return self.workflows
        self.workflows = WorkflowManager(executors=self._executors,
                                         max_parallel=max_parallel or self.config.max_parallel, event_log=event_log)
        return self.workflows

    def run_workflow(self, principal, text):
        return self.guard.run(principal, 'execute', self.resource('workflows'),
                              lambda: self.workflows.submit(parse_workflow(text)).status())

    def workflow_status(self, principal, run_id):
        return self.guard.run(principal, 'read', self.resource('workflows', run_id),
                              lambda: self.workflows.status(run_id))

    def cancel_workflow(self, principal, run_id):
        return self.guard.run(principal, 'execute', self.resource('workflows', run_id),
                              lambda: self.workflows.cancel(run_id))

    def ee_generate(self, principal, body):
        """
        :param body: ``{"config": {name, parameters, experiments}, "template": text, "outdir": path,
            "force": bool}``
        """
        def _generate():
            from ..representation import get_reader
            _config = body.get('config')
            if not isinstance(_config, ExperimentConfig):
                _config = get_reader('experiment', 'yaml').make_object(_config)
            _runset = generate(_config, body['template'], body['outdir'], force=bool(body.get('force')))
            _document = _runset.to_document()
            _document['message'] = "{} experiments generated".format(len(_runset))
            return _document
        return self.guard.run(principal, 'execute', self.resource('experiments'), _generate)

    def ee_submit(self, principal, outdir):
        return self.guard.run(principal, 'execute', self.resource('workflows'),
                              lambda: self.workflows.submit(submit(load_runset(outdir))).status())

    # -- providers

    def binding(self, label):
        try:
            return self.bindings[label]
        except KeyError:
            raise ProviderError("Unknown provider '{}'! Available providers are: {}".format(
                label, ', '.join(self.bindings)))

    def translate(self, principal, body):
        """
        :param body: ``{"text": ..., "from": ..., "to": ..., "provider": label}``
        :rtype: :py:class:`~asf.provider.InvocationRecord`
        """
        def _translate():
            _request = TranslationRequest.from_document(dict((_k, body.get(_k)) for _k in ('text', 'from', 'to')))
            return translate(self.binding(body.get('provider', 'local')), _request, self.clock)
        return self.guard.run(principal, 'execute', self.resource('translate'), _translate)

    # -- administration

    def audit_records(self, principal, tail=None):
        def _records():
            _records = self.audit_log.to_document()
            return _records[-tail:] if tail else _records
        return self.guard.run(principal, 'admin.audit', self.resource('audit'), _records)

    def token_subjects(self, principal):
        return self.guard.run(principal, 'admin.tokens', self.resource('tokens'), lambda: [
            dict(subject=_r.subject, roles=sorted(_r.roles), loa=_r.loa) for _r in self.token_store.records()])

    def prune_tokens(self, principal, days):
        def _prune():
            _removed = self.token_store.prune_inactive(days)
            self.token_store.to_file(self.config.token_file)
            return dict(removed=_removed)
        return self.guard.run(principal, 'admin.tokens', self.resource('tokens'), _prune)
