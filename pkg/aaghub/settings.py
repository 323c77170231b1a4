import os

from environ import Env
from raven import fetch_git_sha
from raven.exceptions import InvalidGitRepository

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
assert os.path.isfile(os.path.join(BASE_DIR, 'manage.py'))

#####################
# Local environment #
#####################
env = Env()
env.read_env(os.path.join(BASE_DIR, '.env'))

########################
# Django core settings #
########################
DEBUG = env.bool('DEBUG', default=False)
SECRET_KEY = env.str('SECRET_KEY', default=('' if not DEBUG else 'xxx'))
ALLOWED_HOSTS = ['*']

#########
# Paths #
#########
default_var_root = os.path.join(BASE_DIR, 'var')
user_var_root = os.path.expanduser('~/var')
if os.path.isdir(user_var_root):
    default_var_root = user_var_root
VAR_ROOT = env.str('VAR_ROOT', default_var_root)

# Create var root if it doesn't exist
if not os.path.isdir(VAR_ROOT):
    print('Creating var root %s' % VAR_ROOT)
    os.makedirs(VAR_ROOT)

MEDIA_ROOT = os.path.join(VAR_ROOT, 'media')
MEDIA_URL = '/media/'
ROOT_URLCONF = 'aaghub.urls'
STATIC_ROOT = os.path.join(VAR_ROOT, 'static')
STATIC_URL = '/static/'

############
# Database #
############
DATABASES = {
    'default': env.db_url(
        default='sqlite:///%s' % os.path.join(VAR_ROOT, 'aaghub.sqlite3')
    )
}
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

##########
# Caches #
##########
CACHES = {'default': env.cache_url(default='locmemcache://')}

##################
# Installed apps #
##################
INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'raven.contrib.django.raven_compat',
    'rest_framework',
    'rest_framework.authtoken',
    'django_filters',
    'aaghub',
    'analytics',
]

if DEBUG:
    # shell_plus and other goodies
    INSTALLED_APPS.append("django_extensions")

##############
# Middleware #
##############
MIDDLEWARE = [
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
    'django.middleware.security.SecurityMiddleware',
]

#############
# Templates #
#############
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

##########
# Sentry #
##########
try:
    git_sha = fetch_git_sha(BASE_DIR)
except InvalidGitRepository:
    git_sha = None
RAVEN_CONFIG = {
    'dsn': env.str('SENTRY_DSN', default=None),
    'release': git_sha,
}

###########
# Logging #
###########
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {'format': '%(asctime)s %(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {
            'level': env.str('AAG_LOG_LEVEL', default='WARNING'),
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'sentry': {
            'level': 'ERROR',
            'class': 'raven.contrib.django.raven_compat.handlers.SentryHandler',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'analytics': {
            'handlers': ['sentry'],
            'level': 'INFO',
        },
        'raven': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}

############################
# Languages & Localization #
############################
LANGUAGE_CODE = 'en'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

########
# WSGI #
########
WSGI_APPLICATION = 'aaghub.wsgi.application'

##########
# Mailer #
##########
vars().update(env.email_url(
    default=('consolemail://' if DEBUG else 'smtp://localhost:25')
))

#########################
# Django REST Framework #
#########################
REST_FRAMEWORK = {
    'DEFAULT_VERSIONING_CLASS': 'rest_framework.versioning.NamespaceVersioning',
    'ALLOWED_VERSIONS': ('v1',),
    'DEFAULT_PERMISSION_CLASSES': ('rest_framework.permissions.IsAuthenticatedOrReadOnly',),
    'DEFAULT_AUTHENTICATION_CLASSES': ('analytics.api.authentication.ApiKeyAuthentication',),
    'DEFAULT_FILTER_BACKENDS': ('django_filters.rest_framework.DjangoFilterBackend',),
    'DEFAULT_PAGINATION_CLASS': 'rest_framework.pagination.PageNumberPagination',
    'PAGE_SIZE': 20,
    'TEST_REQUEST_DEFAULT_FORMAT': 'json',
}

##########
# Engine #
##########
AAG_KNOWLEDGE_PATH = env.str('AAG_KNOWLEDGE_PATH', default=os.path.join(BASE_DIR, 'knowledge', 'knowledge.json'))
AAG_RUNS_ROOT = env.str('AAG_RUNS_ROOT', default=os.path.join(VAR_ROOT, 'runs'))
AAG_RETRIEVAL_K = env.int('AAG_RETRIEVAL_K', default=6)
AAG_DISTILL_BUDGET = {
    'max_items': env.int('AAG_DISTILL_MAX_ITEMS', default=50),
    'max_chars': env.int('AAG_DISTILL_MAX_CHARS', default=4000),
}
AAG_CONTEXT_BUDGET = env.int('AAG_CONTEXT_BUDGET', default=16000)
AAG_R_MAX = env.int('AAG_R_MAX', default=3)
AAG_WIDTH = env.int('AAG_WIDTH', default=4)
AAG_HIGH_VALUE_THRESHOLD = env.float('AAG_HIGH_VALUE_THRESHOLD', default=10000.0)
AAG_USEFULNESS = {'alpha': 1.25, 'beta': 0.8, 'u_min': 0.05, 'u_max': 10.0}
AAG_CYCLE_LENGTH_CAP = 8
AAG_COORDINATOR = {
    'base_url': env.str('AAG_COORDINATOR_URL', default='https://api.openai.com/v1'),
    'model': env.str('AAG_COORDINATOR_MODEL', default='gpt-4o-mini'),
    'api_key_env': 'AAG_COORDINATOR_API_KEY',
    'timeout': env.int('AAG_COORDINATOR_TIMEOUT', default=60),
}
