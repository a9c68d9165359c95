import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "qball_project.settings")
django.setup()
