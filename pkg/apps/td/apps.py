from django.apps import AppConfig


class TdConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.td'
    verbose_name = 'Stochastic TD'
