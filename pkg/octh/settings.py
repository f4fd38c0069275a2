"""
Django settings for the octh project.

Computation defaults can be overridden from the environment or from a
`.env` file in the project root; command options override both.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

TANGLE_DIR = BASE_DIR / 'tangles'


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'octh-local-commands-only')

DEBUG = os.getenv('OCTH_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'homology.apps.HomologyConfig',
]

# The commands never touch a database.
DATABASES = {}


# Computation defaults

DEFAULT_CHAR = int(os.getenv('OCTH_CHAR', '2'))

DEFAULT_EPSILON = int(os.getenv('OCTH_EPSILON', '1'))

DEFAULT_ALGEBRA = os.getenv('OCTH_ALGEBRA', 'barnatan_pair')

DEFAULT_SEED = int(os.getenv('OCTH_SEED', '0'))

# Desk-scale bound on the number of crossings a command accepts.
MAX_CROSSINGS = int(os.getenv('OCTH_MAX_CROSSINGS', '10'))


# Output

DEFAULT_FORMAT = os.getenv('OCTH_FORMAT', 'text')


# Logging

LOG_LEVEL = os.getenv('OCTH_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'homology': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
