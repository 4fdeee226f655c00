"""
Settings Module
---------------
Automatically loads the correct settings file based on DJANGO_ENVIRONMENT.

Default: development settings
Testing: Set DJANGO_ENVIRONMENT=testing
"""
import os

# Determine which settings to use
ENVIRONMENT = os.environ.get('DJANGO_ENVIRONMENT', 'development')

if ENVIRONMENT == 'testing':
    from .testing import *
else:
    from .development import *
