"""
Celery Application
------------------
Task fan-out for multi-seed TD sweeps and `repro all`.

Tasks run eagerly unless CELERY_TASK_ALWAYS_EAGER=false and a broker URL is set.
"""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')

app = Celery('tdlab')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
