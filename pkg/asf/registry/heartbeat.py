"""
Network side of the registry: liveness probes and service invocation over HTTP.

Both are plain callables so that a store can be driven by fakes in tests:
a prober is ``prober(url, timeout) -> bool`` and an invoker is
``invoker(entry, request) -> response document``.
"""

import logging

import requests

from ..config import kc

__all__ = ['HttpProber', 'HttpInvoker', 'InvocationError']

logger = logging.getLogger(__name__)


class InvocationError(Exception):
    pass


class HttpProber(object):
    """One GET request to the endpoint; a successful (2xx or 3xx) answer means the service is alive."""

    def __init__(self, session=None):
        self._session = session or requests.Session()

    def __call__(self, url, timeout=None):
        _timeout = timeout if timeout is not None else kc('registry', 'heartbeat_timeout')
        try:
            _response = self._session.get(url, timeout=_timeout)
        except requests.RequestException as _e:
            logger.debug("Probe of %s failed: %s", url, _e)
            return False
        return _response.ok


class HttpInvoker(object):
    """POST the request document to the entry endpoint and return the JSON answer."""

    def __init__(self, session=None, timeout=30.0):
        self._session = session or requests.Session()
        self._timeout = timeout

    def __call__(self, entry, request):
        try:
            _response = self._session.post(entry.endpoint, json=request, timeout=self._timeout)
            _response.raise_for_status()
            return _response.json()
        except (requests.RequestException, ValueError) as _e:
            raise InvocationError("Invocation of '{}' at {} failed: {}".format(entry.name, entry.endpoint, _e))
