"""Access to the OPKIT_* settings.

Values come from `django.conf.settings` when the project settings are
loaded (the normal `manage.py` path). When the library is imported on its
own, the same names are read from the environment.
"""

import os

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

_DEFAULTS = {
    'OPKIT_CAP': 10 ** 6,
    'OPKIT_NESTING_BOUND': 4,
    'OPKIT_DEBUG_CHECKS': False,
    'OPKIT_DEFAULT_SEED': 0,
}


_ENV_NAMES = {'OPKIT_DEFAULT_SEED': 'OPKIT_SEED'}


def _from_env(name, default):
    raw = os.getenv(_ENV_NAMES.get(name, name))
    if raw is None:
        return default
    if isinstance(default, bool):
        return raw.strip().lower() in ('1', 'true', 'yes', 'on')
    return type(default)(raw)


def _setting(name):
    default = _DEFAULTS[name]
    try:
        return getattr(settings, name, default)
    except ImproperlyConfigured:
        return _from_env(name, default)


def cap() -> int:
    return int(_setting('OPKIT_CAP'))


def nesting_bound() -> int:
    return int(_setting('OPKIT_NESTING_BOUND'))


def debug_checks() -> bool:
    return bool(_setting('OPKIT_DEBUG_CHECKS'))


def default_seed() -> int:
    return int(_setting('OPKIT_DEFAULT_SEED'))
