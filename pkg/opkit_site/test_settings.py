"""Test settings: the normal settings with an in-memory SQLite database.

    python manage.py test --settings=opkit_site.test_settings
"""

from .settings import *  # noqa: F401,F403

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

OPKIT_CAP = 10 ** 6
OPKIT_DEFAULT_SEED = 0

LOGGING['loggers']['opkit']['level'] = 'ERROR'  # noqa: F405
