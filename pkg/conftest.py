"""Configure Django for pytest using the testing settings."""
import os

import django

os.environ.setdefault('DJANGO_ENVIRONMENT', 'testing')
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
django.setup()
