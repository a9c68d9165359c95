from django.apps import AppConfig


class SphericalConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.spherical'
    verbose_name = 'Spherical functions and little q-Jacobi polynomials'
