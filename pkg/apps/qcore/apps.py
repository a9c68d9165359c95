from django.apps import AppConfig


class QcoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.qcore'
    verbose_name = 'q-special function kernels'
