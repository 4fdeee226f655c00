"""
Testing Settings
----------------
Settings for running automated tests.

Characteristics:
- In-memory database (never touched by the suite)
- Celery runs synchronously
- Logging silenced
- Outputs go to a throwaway directory
"""
import tempfile

from .base import *

# Disable logging in tests
LOGGING = {
    'version': 1,
    'disable_existing_loggers': True,
}

# Celery - Synchronous for testing
CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True

CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'tdlab-tests',
    }
}

EXPERIMENT_OUTPUT_DIR = Path(tempfile.gettempdir()) / 'tdlab-test-runs'

DEBUG = False

SECRET_KEY = 'test-secret-key-not-for-production'

ALLOWED_HOSTS = ['*']
