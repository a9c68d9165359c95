from django.apps import AppConfig


class RadialConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.radial'
    verbose_name = 'Radial grid, Jackson measures and radial functions'
