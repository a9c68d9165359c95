from django.apps import AppConfig


class PlancherelConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.plancherel'
    verbose_name = 'Plancherel measure and spherical transform'
