from django.apps import AppConfig


class DpConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.dp'
    verbose_name = 'Model-Based Iterations'
