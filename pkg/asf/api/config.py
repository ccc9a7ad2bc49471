import os

from collections import namedtuple

import six

from ..config import kc

__all__ = ['ServiceConfig', 'ServiceConfigError']


class ServiceConfigError(Exception):
    pass


class ServiceConfig(namedtuple('ServiceConfig', ('host', 'port', 'store_file', 'token_file', 'audit_log',
                                                 'visibility', 'base_url', 'max_parallel'))):
    """
    Settings of the REST service and the CLI, taken from the ``service`` configuration section.

    :raise ServiceConfigError: if the port is out of range, two file paths coincide or the
        visibility is unknown
    """
    __slots__ = ()

    def __new__(cls, host, port, store_file, token_file, audit_log, visibility='public', base_url=None,
                max_parallel=None):
        try:
            port = int(port)
        except (TypeError, ValueError):
            raise ServiceConfigError("Port must be an integer, got {!r}".format(port))
        if not 1 <= port <= 65535:
            raise ServiceConfigError("Port must be in [1, 65535], got {}".format(port))
        _paths = [store_file, token_file, audit_log]
        if any(not isinstance(_p, six.string_types) or not _p for _p in _paths):
            raise ServiceConfigError("Store, token and audit file names must be nonempty strings")
        if len(set(os.path.abspath(_p) for _p in _paths)) != len(_paths):
            raise ServiceConfigError("Store file, token file and audit log must be distinct paths")
        if visibility not in ('public', 'private'):
            raise ServiceConfigError("Unknown registry visibility '{}'! Expected 'public' or 'private'.".format(visibility))
        if base_url is None:
            base_url = "http://{}:{}".format(host, port)
        if max_parallel is None:
            max_parallel = kc('workflow', 'max_parallel')
        if int(max_parallel) < 1:
            raise ServiceConfigError("max_parallel must be at least 1, got {}".format(max_parallel))
        return super(ServiceConfig, cls).__new__(cls, host, port, store_file, token_file, audit_log, visibility,
                                                 base_url, int(max_parallel))

    @classmethod
    def from_config(cls, **overrides):
        """the ``service`` section of the configuration, with keyword overrides (``None`` is ignored)"""
        _settings = dict(kc('service'))
        _settings.update((_k, _v) for _k, _v in six.iteritems(overrides) if _v is not None)
        _unknown = sorted(set(_settings) - set(cls._fields))
        if _unknown:
            raise ServiceConfigError("Unknown service setting(s): {}".format(', '.join(_unknown)))
        return cls(**_settings)

    @property
    def url(self):
        return "http://{}:{}".format(self.host, self.port)
