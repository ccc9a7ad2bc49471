"""
REST interface of the analytics service framework.

Every route resolves the caller from the ``Authorization: Bearer <token>`` header (optionally
elevated by an ``X-Second-Factor`` header) and forwards to one
:py:class:`~asf.api.context.ServiceContext` operation. Errors are answered as
``{"error": <message>}`` with the status code of their class.
"""

import logging

from flask import Flask, Response, g, jsonify, request
from werkzeug.exceptions import BadRequest, HTTPException

from ..core.profiles import RoleProfileError
from ..experiment import ExperimentError, OutputExistsError
from ..federation import CatalogError, FederationError
from ..provider import ProviderError, UnsupportedPairError
from ..registry import (RegistryError, EntryValidationError, RegistryConflictError, RegistryNotFoundError,
                        NotApplicableError)
from ..representation import DReprError
from ..security import AuthenticationError, SecondFactorError, AccessDeniedError, ANONYMOUS_SUBJECT, bearer_token
from ..workflow import WorkflowError, UnknownRunError
from .context import ServiceContext

__all__ = ['create_app', 'serve', 'status_for_error', 'ERROR_STATUS']

logger = logging.getLogger(__name__)

SECOND_FACTOR_HEADER = 'X-Second-Factor'

# first matching class decides
ERROR_STATUS = (
    (BadRequest, 400),
    (AuthenticationError, 401),
    (SecondFactorError, 401),
    (AccessDeniedError, 403),
    (RegistryNotFoundError, 404),
    (UnknownRunError, 404),
    (RegistryConflictError, 409),
    (OutputExistsError, 409),
    (EntryValidationError, 422),
    (NotApplicableError, 422),
    (UnsupportedPairError, 422),
    (WorkflowError, 422),
    (ExperimentError, 422),
    (CatalogError, 422),
    (FederationError, 422),
    (RegistryError, 400),
    (ProviderError, 400),
    (DReprError, 400),
    (RoleProfileError, 400),
    (KeyError, 400),
    (ValueError, 400),
    (TypeError, 400),
)


def status_for_error(error):
    for _class, _status in ERROR_STATUS:
        if isinstance(error, _class):
            return _status
    return 500


def _json_body():
    _body = request.get_json(silent=True)
    if not isinstance(_body, dict):
        raise BadRequest("Request body must be a JSON object")
    return _body


def _principal():
    g.principal = g.context.principal(bearer_token(request.headers.get('Authorization')),
                                      second_factor=request.headers.get(SECOND_FACTOR_HEADER),
                                      action='authenticate', resource=request.path)
    return g.principal


def _record_response(record, status=200):
    return Response(record.to_json() + '\n', status=status, mimetype='application/json')


def create_app(config=None, context=None):
    """
    Flask application factory.

    :param config: :py:class:`~asf.api.config.ServiceConfig`; ignored if `context` is given
    :param context: prepared :py:class:`~asf.api.context.ServiceContext` (tests pass fakes here)
    """
    _context = context if context is not None else ServiceContext(config)
    app = Flask(__name__)
    app.config['ASF_CONTEXT'] = _context

    @app.before_request
    def _bind_context():
        g.context = _context
        g.principal = None

    @app.errorhandler(Exception)
    def _handle_error(error):
        if isinstance(error, HTTPException) and not isinstance(error, BadRequest):
            return jsonify({"error": error.description}), error.code
        _status = status_for_error(error)
        if _status == 403 and g.get('principal') is not None and g.principal.subject == ANONYMOUS_SUBJECT:
            _status = 401
        if _status == 500:
            logger.exception("Unhandled error on %s %s", request.method, request.path)
        _message = error.description if isinstance(error, BadRequest) else str(error)
        _document = {"error": _message}
        if isinstance(error, EntryValidationError):
            _document['report'] = error.report.to_document()
        return jsonify(_document), _status

    # -- registry

    @app.route('/entries', methods=['GET'])
    def list_entries():
        return jsonify(_context.list_entries(_principal()))

    @app.route('/entries', methods=['POST'])
    def add_entry():
        _principal()
        return jsonify(_context.add_entry(g.principal, _json_body())), 201

    @app.route('/entries/<entry_id>', methods=['GET'])
    def get_entry(entry_id):
        return jsonify(_context.get_entry(_principal(), entry_id))

    @app.route('/entries/<entry_id>', methods=['PUT'])
    def update_entry(entry_id):
        _principal()
        return jsonify(_context.update_entry(g.principal, entry_id, _json_body()))

    @app.route('/entries/<entry_id>', methods=['DELETE'])
    def remove_entry(entry_id):
        return jsonify(_context.remove_entry(_principal(), entry_id))

    @app.route('/entries/<entry_id>/heartbeat', methods=['GET'])
    def heartbeat(entry_id):
        return jsonify(_context.heartbeat(_principal(), entry_id))

    @app.route('/search', methods=['GET'])
    def search():
        _query = dict(keywords=request.args.getlist('keyword'), tags=request.args.getlist('tag'),
                      categories=request.args.getlist('category'))
        return jsonify(_context.search(_principal(), _query))

    # -- catalog, federation, FAIR

    @app.route('/catalog', methods=['GET'])
    def catalog():
        return jsonify(_context.catalog(_principal()))

    @app.route('/federation/search', methods=['POST'])
    def federation_search():
        _principal()
        return jsonify(_context.federation_search(g.principal, request.get_json(silent=True) or {}))

    @app.route('/fair/audit', methods=['POST'])
    def fair_audit():
        _principal()
        return jsonify(_context.fair_audit(g.principal, _json_body()))

    # -- workflows and experiments

    @app.route('/workflows', methods=['POST'])
    def run_workflow():
        _principal()
        _text = request.get_data(as_text=True)
        if not _text.strip():
            raise BadRequest("Request body must contain a YAML workflow definition")
        return jsonify(_context.run_workflow(g.principal, _text)), 202

    @app.route('/workflows/<run_id>/status', methods=['GET'])
    def workflow_status(run_id):
        return jsonify(_context.workflow_status(_principal(), run_id))

    @app.route('/workflows/<run_id>', methods=['DELETE'])
    def cancel_workflow(run_id):
        return jsonify(_context.cancel_workflow(_principal(), run_id))

    @app.route('/ee/generate', methods=['POST'])
    def ee_generate():
        _principal()
        return jsonify(_context.ee_generate(g.principal, _json_body())), 201

    # -- providers and administration

    @app.route('/translate', methods=['POST'])
    def translate():
        _principal()
        return _record_response(_context.translate(g.principal, _json_body()))

    @app.route('/audit', methods=['GET'])
    def audit_trail():
        _tail = request.args.get('tail', type=int)
        return jsonify(_context.audit_records(_principal(), tail=_tail))

    return app


def serve(config=None, debug=False):
    """
    Run the REST service until interrupted.

    :raise OSError: if the port cannot be bound
    """
    _context = ServiceContext(config)
    _app = create_app(context=_context)
    logger.info("Serving %d registry entries on %s:%d", len(_context.store), _context.config.host,
                _context.config.port)
    _app.run(host=_context.config.host, port=_context.config.port, debug=debug, threaded=True)
    return _app
