"""
Django settings for sparsification_lab project.

Started from 'django-admin startproject'. The SPARSIFY block at the bottom
holds every algorithm constant of the sparsifiers; each one can be
overridden from the environment with a ``SPARSIFY_`` prefixed variable.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/4.2/howto/deployment/checklist/

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-sparsification-lab-desk-scale-key-change-me',
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DJANGO_DEBUG', '1') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'hypergraphs',
    'sparsifiers',
    'verification',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'sparsification_lab.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'sparsification_lab.wsgi.application'


# Database
# Runs recorded with --record and their quality reports live here.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Password validation
# https://docs.djangoproject.com/en/4.2/ref/settings/#auth-password-validators

AUTH_PASSWORD_VALIDATORS = [
    {
        'NAME': 'django.contrib.auth.password_validation.UserAttributeSimilarityValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.MinimumLengthValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.CommonPasswordValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.NumericPasswordValidator',
    },
]


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (CSS, JavaScript, Images)

STATIC_URL = 'static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# Log records never end up in the sparsifier or report files, so outputs
# stay byte-identical between runs.

SPARSIFY_LOG_LEVEL = os.environ.get('SPARSIFY_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'hypergraphs': {'handlers': ['console'], 'level': SPARSIFY_LOG_LEVEL},
        'sparsifiers': {'handlers': ['console'], 'level': SPARSIFY_LOG_LEVEL},
        'verification': {'handlers': ['console'], 'level': SPARSIFY_LOG_LEVEL},
    },
}


# Sparsifier constants

SPARSIFY_DEFAULTS = {
    # iteration constant c of the halving recursion
    'C_ITER': 200.0,
    # number of game steps T = ceil(C_T * n / eps^2)
    'C_T': 16.0,
    # constant c of the sampling threshold L = c eps^2 / (r^4 log n)
    'C_L': 30.0,
    # eta = min(eps, 1/4) / (ETA_CONSTANT * sqrt(d_max * m))
    'ETA_CONSTANT': 4.0,
    # the 10 in 10 * sqrt(d log(dr)) * |S|
    'THRESHOLD_CONSTANT': 10.0,
    'RESAMPLE_CAP_FACTOR': 64.0,
    'RESAMPLE_RETRIES': 3,
    'MAX_DENSE_VERTICES': 4000,
    'MAX_DET_VERTICES': 256,
    'MAX_BRUTE_FORCE_VERTICES': 20,
    'MAX_EXHAUSTIVE_MULTIPLICATIVE_VERTICES': 16,
    'CERTIFICATE_SLACK': 8.0,
    'RANDOM_TRIALS': 10000,
    'PSD_TOLERANCE': 1e-8,
    'EIGEN_FLOOR': 1e-14,
    'PSEUDOINVERSE_CUTOFF': 1e-12,
    'BISECTION_TOLERANCE': 1e-12,
}


def _from_environment(defaults, prefix='SPARSIFY_'):
    resolved = {}
    for name, default in defaults.items():
        raw = os.environ.get(prefix + name)
        resolved[name] = default if raw is None else type(default)(raw)
    return resolved


SPARSIFY = _from_environment(SPARSIFY_DEFAULTS)
