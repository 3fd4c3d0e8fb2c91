"""Django settings for the opkit project.

Runtime notes:
- `.env` is loaded with python-dotenv; every OPKIT_* value below can be set
  there or in the process environment.
- `OPKIT_CAP` bounds every hom-set enumeration and coend raw set.
- Run history lives in the database given by `DATABASE_URL`, or in a local
  SQLite file when it is unset.
"""

import os
from pathlib import Path

import dj_database_url
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'django-insecure-opkit-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'api',
]

DATABASE_URL = os.environ.get('DATABASE_URL')

if DATABASE_URL:
    DATABASES = {
        'default': dj_database_url.parse(DATABASE_URL, conn_max_age=600)
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': os.getenv('OPKIT_DB_PATH', str(BASE_DIR / 'opkit_runs.sqlite3')),
        }
    }

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# --- OPKIT ---
OPKIT_CAP = int(os.getenv('OPKIT_CAP', 10 ** 6))
OPKIT_NESTING_BOUND = int(os.getenv('OPKIT_NESTING_BOUND', 4))
OPKIT_DEBUG_CHECKS = os.getenv('OPKIT_DEBUG_CHECKS', 'False').lower() in ('1', 'true', 'yes', 'on')
OPKIT_DEFAULT_SEED = int(os.getenv('OPKIT_SEED', 0))
OPKIT_LOG_LEVEL = os.getenv('OPKIT_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'opkit': {'handlers': ['console'], 'level': OPKIT_LOG_LEVEL, 'propagate': False},
        'services': {'handlers': ['console'], 'level': OPKIT_LOG_LEVEL, 'propagate': False},
        'api': {'handlers': ['console'], 'level': OPKIT_LOG_LEVEL, 'propagate': False},
    },
}
