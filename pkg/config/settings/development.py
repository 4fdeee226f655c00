"""
Development Settings
--------------------
Settings for running experiments locally.

Characteristics:
- DEBUG = True
- Celery tasks run eagerly unless a broker is configured
- Detailed logging to the console
"""
from .base import *

DEBUG = True

SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-dev-key-tdlab')

ALLOWED_HOSTS = ['localhost', '127.0.0.1']

# Logging - Detailed for debugging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[{levelname}] {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': os.environ.get('TDLAB_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'core': {
            'handlers': ['console'],
            'level': os.environ.get('TDLAB_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
}
