"""
Handle global asf configuration
"""

import os
import yaml

from copy import deepcopy

__all__ = ['kc', 'load_user_config', 'reset_config',
           'ConfigError', 'ConfigLookupError', 'ConfigTypeError']

CONFIG_ENV_VARIABLE = 'ASF_CONFIG'


class ConfigError(Exception):
    pass


class ConfigLookupError(ConfigError):
    def __init__(self, key_path, problematic_key_index):
        self.message = ("Error getting config key for '{}': "
                        "cannot find config node '{}'!".format(', '.join(key_path), key_path[problematic_key_index]))
        super(ConfigLookupError, self).__init__(self.message)


class ConfigTypeError(ConfigError):
    def __init__(self, key_path, problematic_key_index):
        self.message = ("Error getting config key for '{}': "
                        "scalar node '{}' encountered inside path!".format(', '.join(key_path), key_path[problematic_key_index]))
        super(ConfigTypeError, self).__init__(self.message)


class ConfigLoader(yaml.SafeLoader):
    def __init__(self, file_like):
        self._current_dir = os.path.split(getattr(file_like, 'name', ''))[0]
        super(ConfigLoader, self).__init__(file_like)

    # custom directives
    def include(self, node):
        _include_path = self.construct_scalar(node)
        with open(os.path.join(self._current_dir, _include_path)) as _f:
            return yaml.load(_f, ConfigLoader)

ConfigLoader.add_constructor('!include', ConfigLoader.include)


def _merge(base, override):
    """recursively merge the dict `override` into the dict `base` (in place)"""
    for _k, _v in override.items():
        if isinstance(_v, dict) and isinstance(base.get(_k), dict):
            _merge(base[_k], _v)
        else:
            base[_k] = _v
    return base


# -- read in default global asf configuration from file
with open(os.path.join(__path__[0], 'asf.yaml')) as _f:
    _kc = yaml.load(_f, ConfigLoader)

# make a copy of the default configuration
_default_kc = deepcopy(_kc)


def load_user_config(filename):
    """Merge a user YAML configuration file over the current configuration."""
    try:
        with open(filename) as _f:
            _user_kc = yaml.load(_f, ConfigLoader) or {}
    except (IOError, OSError) as _e:
        raise ConfigError("Cannot read configuration file '{}': {}".format(filename, _e))
    except yaml.YAMLError as _e:
        raise ConfigError("Cannot parse configuration file '{}': {}".format(filename, _e))
    if not isinstance(_user_kc, dict):
        raise ConfigError("Configuration file '{}' must contain a mapping!".format(filename))
    _merge(_kc, _user_kc)
    return _kc


def reset_config():
    """Restore the packaged default configuration."""
    _kc.clear()
    _kc.update(deepcopy(_default_kc))


def kc(*keys):
    """Lookup configuration entry by providing the path to it."""
    _dict = _kc

    # if called without args, retreive the entire configuration dict
    if not keys:
        return _kc

    try:
        for _i, _k in enumerate(keys):
            _dict = _dict[_k]
    except KeyError:
        raise ConfigLookupError(keys, _i)
    except TypeError:
        raise ConfigTypeError(keys, _i)

    return _dict


if os.environ.get(CONFIG_ENV_VARIABLE):
    load_user_config(os.environ[CONFIG_ENV_VARIABLE])
