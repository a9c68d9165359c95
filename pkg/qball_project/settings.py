"""
Django settings for qball_project project.
Radial harmonic analysis on the quantum matrix ball
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-qball-numerics-only-no-sessions')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',

    # Local apps
    'apps.common',
    'apps.qcore',
    'apps.partitions',
    'apps.radial',
    'apps.spherical',
    'apps.qdiff',
    'apps.plancherel',
    'apps.harness',
]

# Pure numerics: nothing is persisted, so the dummy backend is enough.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# ==============================================================================
# DJANGO REST FRAMEWORK
# ==============================================================================

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
    'STRICT_JSON': True,
}

# ==============================================================================
# QUANTUM MATRIX BALL NUMERICS
# ==============================================================================

# Deformation parameter, 0 < q < 1
QBALL_Q = config('QBALL_Q', default=0.5, cast=float)

# Matrix size n and truncation window |lambda| <= max_weight
QBALL_N = config('QBALL_N', default=2, cast=int)
QBALL_MAX_WEIGHT = config('QBALL_MAX_WEIGHT', default=8, cast=int)

# Composite Simpson subintervals per spectral axis (n >= 2, and the disk n = 1)
QBALL_QUAD_NODES = config('QBALL_QUAD_NODES', default=256, cast=int)
QBALL_QUAD_NODES_DISK = config('QBALL_QUAD_NODES_DISK', default=2048, cast=int)

# Series / infinite product truncation
QBALL_SERIES_TOL = config('QBALL_SERIES_TOL', default=1e-15, cast=float)
QBALL_PRODUCT_TOL = config('QBALL_PRODUCT_TOL', default=1e-16, cast=float)
QBALL_MAX_TERMS = config('QBALL_MAX_TERMS', default=500, cast=int)

# Output of the management commands
QBALL_OUTPUT_FORMAT = config('QBALL_OUTPUT_FORMAT', default='json')

# Checks slower than this (seconds) are logged as warnings
QBALL_SLOW_THRESHOLD = config('QBALL_SLOW_THRESHOLD', default=5.0, cast=float)

# ==============================================================================
# CACHING
# ==============================================================================

CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'qball-tables',
        'TIMEOUT': None,  # tables are write-once per (n, q)
        'OPTIONS': {
            'MAX_ENTRIES': 5000,
        }
    }
}

# ==============================================================================
# LOGGING
# ==============================================================================

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'filters': {
        'require_debug_true': {
            '()': 'django.utils.log.RequireDebugTrue',
        },
    },
    'handlers': {
        'console': {
            'level': config('QBALL_CONSOLE_LOG_LEVEL', default='WARNING'),
            'filters': ['require_debug_true'],
            'class': 'logging.StreamHandler',
            'formatter': 'simple'
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': BASE_DIR / 'logs' / 'qball.log',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console', 'file'],
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'apps': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
        'apps.harness': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Create logs directory if it doesn't exist
LOGS_DIR = BASE_DIR / 'logs'
LOGS_DIR.mkdir(exist_ok=True)
