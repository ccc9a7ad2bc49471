"""
Command line interface ``asf``.

Structured output is JSON on standard output. Exit codes: 0 on success, 1 on failure (the
message goes to standard error), 2 on usage errors.
"""

from __future__ import print_function

import argparse
import json
import logging
import os
import sys

import six

from ..config import kc, load_user_config
from ..core.profiles import ROLES
from ..tools import print_json
from .config import ServiceConfig

__all__ = ['main', 'make_parser', 'CliError']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class CliError(Exception):
    pass


class _Session(object):
    """lazily created service context and the operator principal of one CLI invocation"""

    def __init__(self, args, stdout, stderr):
        self.args = args
        self.stdout = stdout
        self.stderr = stderr
        self._context = None
        self._principal = None

    @property
    def context(self):
        if self._context is None:
            from .context import ServiceContext
            _config = ServiceConfig.from_config(store_file=self.args.store, token_file=self.args.tokens,
                                                audit_log=self.args.audit_log)
            self._context = ServiceContext(_config)
        return self._context

    @property
    def principal(self):
        if self._principal is None:
            from .context import cli_principal
            self._principal = cli_principal()
        return self._principal

    def emit(self, document, sort_keys=True):
        print_json(document, output_stream=self.stdout, sort_keys=sort_keys)


def _read_json(filename):
    try:
        with open(filename) as _f:
            return json.load(_f)
    except (IOError, OSError) as _e:
        raise CliError("Cannot read '{}': {}".format(filename, _e))
    except ValueError as _e:
        raise CliError("'{}' is no valid JSON: {}".format(filename, _e))


def _read_text(filename):
    try:
        with open(filename) as _f:
            return _f.read()
    except (IOError, OSError) as _e:
        raise CliError("Cannot read '{}': {}".format(filename, _e))


def _member_files(specs):
    """``LABEL=FILE`` arguments as a mapping"""
    _result = dict()
    for _spec in specs or ():
        _label, _sep, _filename = _spec.partition('=')
        if not _sep or not _label or not _filename:
            raise CliError("Member must be given as LABEL=FILE, got '{}'".format(_spec))
        _result[_label] = _filename
    return _result


def _query(args):
    return dict(keywords=args.keyword or [], tags=args.tag or [], categories=args.category or [])


# -- registry

def _registry_add(session, args):
    session.emit(session.context.add_entry(session.principal, _read_json(args.file)))


def _registry_get(session, args):
    session.emit(session.context.get_entry(session.principal, args.id))


def _registry_update(session, args):
    _document = _read_json(args.file)
    if 'id' not in _document:
        raise CliError("Entry document '{}' has no id".format(args.file))
    session.emit(session.context.update_entry(session.principal, _document['id'], _document))


def _registry_remove(session, args):
    session.emit(session.context.remove_entry(session.principal, args.id))


def _registry_search(session, args):
    session.emit(session.context.search(session.principal, _query(args)))


def _registry_validate(session, args):
    from ..core.entry import ServiceEntry
    from ..core.profiles import validate_entry
    _report = validate_entry(ServiceEntry.from_document(_read_json(args.file)), args.role)
    session.emit(_report.to_document())
    return EXIT_OK if _report.valid else EXIT_FAILURE


def _registry_heartbeat(session, args):
    session.emit(session.context.heartbeat(session.principal, args.id))


# -- catalog and federation

def _catalog_export(session, args):
    _catalog = session.context.catalog(session.principal)
    if args.output:
        from ..io import atomic_write
        atomic_write(args.output, json.dumps(_catalog, indent=2, sort_keys=True) + '\n')
    else:
        session.emit(_catalog)


def _catalog_merge(session, args):
    from ..federation import merge_catalogs
    session.emit(merge_catalogs([_read_json(_f) for _f in args.files]))


def _read_view(filename):
    from ..representation import read_file
    return read_file('federation', filename, 'json')


def _write_view(view, filename):
    from ..representation import write_file
    write_file(view, 'federation', filename, 'json')


def _fed_build(session, args):
    from ..federation import federate
    from ..representation import get_writer
    from .context import _read_registry_dump
    _files = _member_files(args.member)
    if args.include_local:
        _members = session.context.federation_members(_files)
    else:
        _members = [(_label, _read_registry_dump(_files[_label])) for _label in sorted(_files)]
    if not _members:
        raise CliError("Nothing to federate: give --member LABEL=FILE or --include-local")
    _view = federate(_members, duplicate_policy=args.policy)
    if args.output:
        _write_view(_view, args.output)
        session.emit(dict(members=list(_view.labels), entries=len(_view), output=args.output))
    else:
        session.emit(get_writer('federation', 'json').make_document(_view))


def _fed_search(session, args):
    if args.view:
        from ..federation import federated_search
        session.emit([dict(origin=_origin, entry=_entry.to_document())
                      for _origin, _entry in federated_search(_read_view(args.view), _query(args))])
        return
    _members = dict((_label, _read_json(_filename))
                    for _label, _filename in six.iteritems(_member_files(args.member)))
    _body = dict(query=_query(args), duplicate_policy=args.policy, members=_members)
    session.emit(session.context.federation_search(session.principal, _body))


def _fed_enrich(session, args):
    from ..federation import enrich
    _view = _read_view(args.view)
    _enrichment = dict((_k, getattr(args, _k)) for _k in
                       ('cost_comparison', 'rating', 'benchmark_note', 'sla_note', 'carbon_cost')
                       if getattr(args, _k) is not None)
    _view = enrich(_view, args.id, _enrichment)
    _write_view(_view, args.view)
    _origin, _entry, _enrichment = _view.lookup(args.id)
    session.emit(dict(origin=_origin, id=_entry.id, enrichment=_enrichment.to_document()))


# -- FAIR audit

def _fair_audit(session, args):
    from ..fair import ComplianceReport, PrincipleCheck
    _entry = _read_json(args.entry) if os.path.isfile(args.entry) else args.entry
    _context = dict(indexed_in_search=not args.not_indexed, protocol_open=not args.closed_protocol,
                    metadata_retained=not args.not_retained)
    _report = session.context.fair_audit(session.principal, dict(entry=_entry, context=_context))
    if args.table:
        ComplianceReport([PrincipleCheck(**_c) for _c in _report['checks']]).report(output_stream=session.stdout)
    else:
        session.emit(_report)
    return EXIT_OK if _report['overall'] == 'pass' else EXIT_FAILURE


# -- workflows and experiments

def _wait_for(session, status, timeout):
    _handle = session.context.workflows.get(status['run_id'])
    if not _handle.wait(timeout):
        _handle.cancel()
        _handle.wait()
    _final = _handle.status()
    session.emit(_final)
    return EXIT_OK if all(_s == 'done' for _s in _final['states'].values()) else EXIT_FAILURE


def _workflow_run(session, args):
    session.context.configure_workflows(max_parallel=args.max_parallel, event_log=args.event_log)
    _status = session.context.run_workflow(session.principal, _read_text(args.file))
    return _wait_for(session, _status, args.timeout)


def _remote(session, args, method, path):
    import requests
    _headers = dict()
    _token = args.token or os.environ.get('ASF_TOKEN')
    if _token:
        _headers['Authorization'] = "Bearer {}".format(_token)
    _url = (args.url or kc('service', 'base_url')).rstrip('/') + path
    try:
        _response = requests.request(method, _url, headers=_headers, timeout=kc('registry', 'heartbeat_timeout'))
    except requests.RequestException as _e:
        raise CliError("Cannot reach the service at {}: {}".format(_url, _e))
    try:
        _document = _response.json()
    except ValueError:
        raise CliError("Service answered {} with a non-JSON body".format(_response.status_code))
    if not _response.ok:
        raise CliError(_document.get('error', "HTTP {}".format(_response.status_code)))
    session.emit(_document)


def _workflow_status(session, args):
    _remote(session, args, 'GET', '/workflows/{}/status'.format(args.run_id))


def _workflow_cancel(session, args):
    _remote(session, args, 'DELETE', '/workflows/{}'.format(args.run_id))


def _ee_expand(session, args):
    from ..experiment import expand, load_experiment_config
    session.emit([dict(slug=_a.slug, values=_a.to_document())
                  for _a in expand(load_experiment_config(args.config))], sort_keys=False)


def _ee_generate(session, args):
    from ..experiment import load_experiment_config
    _body = dict(config=load_experiment_config(args.config), template=_read_text(args.template),
                 outdir=args.outdir, force=args.force)
    session.emit(session.context.ee_generate(session.principal, _body))


def _ee_submit(session, args):
    session.context.configure_workflows(max_parallel=args.max_parallel)
    _status = session.context.ee_submit(session.principal, args.outdir)
    return _wait_for(session, _status, args.timeout)


# -- providers

def _request(args):
    from ..provider import TranslationRequest
    return TranslationRequest(' '.join(args.text), args.source, args.target)


def _selected_bindings(session, labels):
    from ..provider import bindings_from_config
    _bindings = bindings_from_config()
    if not labels:
        return list(_bindings.values())
    _unknown = [_l for _l in labels if _l not in _bindings]
    if _unknown:
        raise CliError("Unknown provider(s): {}. Available providers are: {}".format(
            ', '.join(_unknown), ', '.join(_bindings)))
    return [_bindings[_l] for _l in labels]


def _clock(args):
    from ..provider import Clock
    return Clock(simulate_delay=False if getattr(args, 'no_delay', False) else None)


def _nlp_translate(session, args):
    _body = {'text': ' '.join(args.text), 'from': args.source, 'to': args.target, 'provider': args.provider}
    _record = session.context.translate(session.principal, _body)
    session.stdout.write(_record.to_json() + '\n')


def _nlp_benchmark(session, args):
    from ..provider import compare, format_stats_table, plot_benchmark
    _bindings = _selected_bindings(session, args.provider)
    _samples = dict()
    _stats = compare(_bindings, _request(args), args.n, clock=_clock(args), samples=_samples)
    if args.plot:
        plot_benchmark(_samples, args.plot)
    if args.compare:
        session.stdout.write(format_stats_table(_stats) + '\n')
    elif len(_stats) == 1:
        session.emit(list(_stats.values())[0].to_document(), sort_keys=False)
    else:
        session.emit(dict((_l, _s.to_document()) for _l, _s in six.iteritems(_stats)), sort_keys=False)


def _nlp_compete(session, args):
    from ..provider import compete, compare
    _bindings = _selected_bindings(session, args.provider)
    _request_ = _request(args)
    _stats = None
    if args.stats:
        _stats = dict((_l, _v['mean'] if isinstance(_v, dict) else _v)
                      for _l, _v in six.iteritems(_read_json(args.stats)))
    elif args.benchmark:
        _stats = compare(_bindings, _request_, args.benchmark, clock=_clock(args))
    _preferences = args.prefer.split(',') if args.prefer else None
    _label, _record = compete(_bindings, _request_, args.policy, stats=_stats, preferences=_preferences,
                              clock=_clock(args))
    session.emit(dict(chosen=_label, record=_record.to_document()), sort_keys=False)


def _nlp_cooperate(session, args):
    from ..provider import cooperate, consensus
    _slots = cooperate(_selected_bindings(session, args.provider), _request(args), clock=_clock(args))
    _output, _providers = consensus(_slots)
    session.emit(dict(records=[_s.to_document() for _s in _slots],
                      consensus=dict(output=_output, providers=_providers)), sort_keys=False)


# -- staging and administration

def _stage(session, args):
    from ..staging import stage_with_receipt
    _manifest, _receipt = stage_with_receipt(args.source, args.destination)
    session.emit(dict(manifest=_manifest.to_document(), receipt=_receipt.to_document()))


def _admin_tokens(session, args):
    if args.prune is not None:
        session.emit(session.context.prune_tokens(session.principal, args.prune))
    else:
        session.emit(session.context.token_subjects(session.principal))


def _admin_audit(session, args):
    session.emit(session.context.audit_records(session.principal, tail=args.tail))


def _serve(session, args):
    from .service import serve
    serve(ServiceConfig.from_config(host=args.host, port=args.port, store_file=args.store,
                                    token_file=args.tokens, audit_log=args.audit_log))


# -- parser

def _add_text_arguments(parser, provider_help, multiple=True):
    if multiple:
        parser.add_argument('--provider', action='append', help=provider_help)
    else:
        parser.add_argument('--provider', default='local', help=provider_help)
    parser.add_argument('--from', dest='source', required=True, help="source language code, e.g. en")
    parser.add_argument('--to', dest='target', required=True, help="target language code, e.g. de")
    parser.add_argument('text', nargs='+', help="text to translate")


def _add_query_arguments(parser):
    parser.add_argument('--keyword', action='append', help="substring of name, title or description")
    parser.add_argument('--tag', action='append', help="required tag")
    parser.add_argument('--category', action='append', help="required category")


def make_parser():
    _parser = argparse.ArgumentParser(prog='asf', description="Analytics service framework: registry, "
                                                              "federation, workflows, experiments and providers.")
    _parser.add_argument('--config', help="YAML file merged over the default configuration")
    _parser.add_argument('--store', help="registry store file (service.store_file)")
    _parser.add_argument('--tokens', help="token file (service.token_file)")
    _parser.add_argument('--audit-log', dest='audit_log', help="audit log file (service.audit_log)")
    _parser.add_argument('-v', '--verbose', action='store_true', help="log at debug level")
    _commands = _parser.add_subparsers(dest='command', metavar='command')
    _commands.required = True

    # registry
    _registry = _commands.add_parser('registry', help="manage registry entries").add_subparsers(
        dest='action', metavar='action')
    _registry.required = True
    _p = _registry.add_parser('add', help="register an entry document")
    _p.add_argument('file')
    _p.set_defaults(handler=_registry_add)
    _p = _registry.add_parser('get', help="show one entry")
    _p.add_argument('id')
    _p.set_defaults(handler=_registry_get)
    _p = _registry.add_parser('update', help="replace an entry (the document carries the id)")
    _p.add_argument('file')
    _p.set_defaults(handler=_registry_update)
    _p = _registry.add_parser('remove', help="remove an entry")
    _p.add_argument('id')
    _p.set_defaults(handler=_registry_remove)
    _p = _registry.add_parser('search', help="search entries")
    _add_query_arguments(_p)
    _p.set_defaults(handler=_registry_search)
    _p = _registry.add_parser('validate', help="validate an entry document against a role profile")
    _p.add_argument('file')
    _p.add_argument('--role', required=True, choices=ROLES)
    _p.set_defaults(handler=_registry_validate)
    _p = _registry.add_parser('heartbeat', help="probe the endpoint of an entry")
    _p.add_argument('id')
    _p.set_defaults(handler=_registry_heartbeat)

    # catalog
    _catalog = _commands.add_parser('catalog', help="catalog export and merge").add_subparsers(
        dest='action', metavar='action')
    _catalog.required = True
    _p = _catalog.add_parser('export', help="catalog document of the registry")
    _p.add_argument('-o', '--output', help="write to this file instead of standard output")
    _p.set_defaults(handler=_catalog_export)
    _p = _catalog.add_parser('merge', help="merge catalog documents")
    _p.add_argument('files', nargs='+')
    _p.set_defaults(handler=_catalog_merge)

    # federation
    _fed = _commands.add_parser('fed', help="federated views").add_subparsers(dest='action', metavar='action')
    _fed.required = True
    _p = _fed.add_parser('build', help="federate registry dumps into a view")
    _p.add_argument('--member', action='append', help="LABEL=FILE registry dump")
    _p.add_argument('--include-local', action='store_true', help="also federate the local store and the "
                                                                 "configured members")
    _p.add_argument('--policy', default='latest-modified', choices=('latest-modified', 'first-member'))
    _p.add_argument('-o', '--output', help="federation file to write")
    _p.set_defaults(handler=_fed_build)
    _p = _fed.add_parser('search', help="search a federated view")
    _p.add_argument('--view', help="federation file written by 'fed build'")
    _p.add_argument('--member', action='append', help="LABEL=FILE registry dump joined to the local store")
    _p.add_argument('--policy', default='latest-modified', choices=('latest-modified', 'first-member'))
    _add_query_arguments(_p)
    _p.set_defaults(handler=_fed_search)
    _p = _fed.add_parser('enrich', help="attach enrichment metadata to an entry of a view")
    _p.add_argument('view')
    _p.add_argument('id')
    _p.add_argument('--cost-comparison', dest='cost_comparison')
    _p.add_argument('--rating', type=float)
    _p.add_argument('--benchmark-note', dest='benchmark_note')
    _p.add_argument('--sla-note', dest='sla_note')
    _p.add_argument('--carbon-cost', dest='carbon_cost', type=float)
    _p.set_defaults(handler=_fed_enrich)

    # FAIR
    _fair = _commands.add_parser('fair', help="FAIR compliance").add_subparsers(dest='action', metavar='action')
    _fair.required = True
    _p = _fair.add_parser('audit', help="audit an entry document or a stored entry id")
    _p.add_argument('entry')
    _p.add_argument('--not-indexed', action='store_true', help="the registry is not indexed in a search")
    _p.add_argument('--closed-protocol', action='store_true', help="the access protocol is not open")
    _p.add_argument('--not-retained', action='store_true', help="metadata is not retained after removal")
    _p.add_argument('--table', action='store_true', help="print a table instead of JSON")
    _p.set_defaults(handler=_fair_audit)

    # workflows
    _workflow = _commands.add_parser('workflow', help="workflow runs").add_subparsers(
        dest='action', metavar='action')
    _workflow.required = True
    _p = _workflow.add_parser('run', help="run a YAML workflow and wait for it")
    _p.add_argument('file')
    _p.add_argument('--max-parallel', dest='max_parallel', type=int)
    _p.add_argument('--event-log', dest='event_log')
    _p.add_argument('--timeout', type=float)
    _p.set_defaults(handler=_workflow_run)
    for _name, _handler, _help in (('status', _workflow_status, "status of a run on a service"),
                                   ('cancel', _workflow_cancel, "cancel a run on a service")):
        _p = _workflow.add_parser(_name, help=_help)
        _p.add_argument('run_id')
        _p.add_argument('--url', help="service URL (service.base_url)")
        _p.add_argument('--token', help="bearer token (or ASF_TOKEN)")
        _p.set_defaults(handler=_handler)

    # experiments
    _ee = _commands.add_parser('ee', help="parameter study experiments").add_subparsers(
        dest='action', metavar='action')
    _ee.required = True
    _p = _ee.add_parser('expand', help="list the assignments of a configuration")
    _p.add_argument('config')
    _p.set_defaults(handler=_ee_expand)
    _p = _ee.add_parser('generate', help="generate one script directory per assignment")
    _p.add_argument('config')
    _p.add_argument('template')
    _p.add_argument('outdir')
    _p.add_argument('--force', action='store_true', help="replace an existing output directory")
    _p.set_defaults(handler=_ee_generate)
    _p = _ee.add_parser('submit', help="run the generated experiments and wait for them")
    _p.add_argument('outdir')
    _p.add_argument('--max-parallel', dest='max_parallel', type=int)
    _p.add_argument('--timeout', type=float)
    _p.set_defaults(handler=_ee_submit)

    # providers
    _nlp = _commands.add_parser('nlp', help="translation providers").add_subparsers(
        dest='action', metavar='action')
    _nlp.required = True
    _p = _nlp.add_parser('translate', help="translate a text with one provider")
    _add_text_arguments(_p, "provider label", multiple=False)
    _p.set_defaults(handler=_nlp_translate)
    _p = _nlp.add_parser('benchmark', help="invocation time statistics")
    _add_text_arguments(_p, "provider label (repeatable; all if omitted)")
    _p.add_argument('-n', type=int, default=100, help="invocations per provider")
    _p.add_argument('--compare', action='store_true', help="print the comparison table")
    _p.add_argument('--plot', help="save the per-invocation plot to this file")
    _p.add_argument('--no-delay', dest='no_delay', action='store_true', help="do not wait for simulated latency")
    _p.set_defaults(handler=_nlp_benchmark)
    _p = _nlp.add_parser('compete', help="select one provider by policy")
    _add_text_arguments(_p, "provider label (repeatable; all if omitted)")
    _p.add_argument('--policy', required=True, choices=('min-mean-latency', 'min-cost', 'preference-list'))
    _p.add_argument('--stats', help="JSON file: label -> mean latency or statistics")
    _p.add_argument('--benchmark', type=int, help="benchmark this many invocations to obtain the statistics")
    _p.add_argument('--prefer', help="comma-separated preference list")
    _p.add_argument('--no-delay', dest='no_delay', action='store_true', help="do not wait for simulated latency")
    _p.set_defaults(handler=_nlp_compete)
    _p = _nlp.add_parser('cooperate', help="invoke a team of providers")
    _add_text_arguments(_p, "provider label (repeatable; all if omitted)")
    _p.add_argument('--no-delay', dest='no_delay', action='store_true', help="do not wait for simulated latency")
    _p.set_defaults(handler=_nlp_cooperate)

    # staging
    _p = _commands.add_parser('stage', help="package, transfer and unpack a directory tree")
    _p.add_argument('source')
    _p.add_argument('destination')
    _p.set_defaults(handler=_stage)

    # administration
    _admin = _commands.add_parser('admin', help="administration").add_subparsers(dest='action', metavar='action')
    _admin.required = True
    _p = _admin.add_parser('tokens', help="list provisioned token subjects or prune inactive tokens")
    _p.add_argument('--prune', type=int, metavar='DAYS', help="delete tokens unused for DAYS days")
    _p.set_defaults(handler=_admin_tokens)
    _p = _admin.add_parser('audit', help="show the audit trail")
    _p.add_argument('--tail', type=int)
    _p.set_defaults(handler=_admin_audit)

    # service
    _p = _commands.add_parser('serve', help="run the REST service")
    _p.add_argument('--host')
    _p.add_argument('--port', type=int)
    _p.set_defaults(handler=_serve)

    return _parser


def main(argv=None, stdout=None, stderr=None):
    """
    Run the ``asf`` command line.

    :return: exit code
    """
    _stdout = stdout or sys.stdout
    _stderr = stderr or sys.stderr
    _parser = make_parser()
    try:
        _args = _parser.parse_args(argv)
    except SystemExit as _e:
        return _e.code if isinstance(_e.code, int) else EXIT_USAGE
    if _args.verbose:
        logging.getLogger('asf').setLevel(logging.DEBUG)
    if _args.config:
        load_user_config(_args.config)
    _session = _Session(_args, _stdout, _stderr)
    try:
        _code = _args.handler(_session, _args)
    except Exception as _e:
        logger.debug("command failed", exc_info=True)
        _stderr.write("error: {}\n".format(_e))
        return EXIT_FAILURE
    return EXIT_OK if _code is None else _code


def console_main():
    sys.exit(main())
