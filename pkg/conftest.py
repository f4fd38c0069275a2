import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'octh.settings')
django.setup()
