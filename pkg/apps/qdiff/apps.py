from django.apps import AppConfig


class QdiffConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.qdiff'
    verbose_name = 'Radial q-difference operators'
