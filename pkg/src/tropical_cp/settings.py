"""
Django settings for tropical_cp.

There is no database and nothing is served: Django provides the settings
layer, app registry and management-command framework behind the ``tropcp``
command line.
"""

import environ
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

# Initialise environment variables
env = environ.Env(
    DEBUG=(bool, False),
    TROPCP_THREADS=(int, 1),
    TROPCP_NODE_LIMIT=(int, 10_000_000),
    TROPCP_TIMEOUT_S=(float, 300.0),
    TROPCP_BLOCK_SEARCH_MAX_L=(int, 6),
    TROPCP_BLOCK_SEARCH_NODE_LIMIT=(int, 200_000),
    TROPCP_COVER_SEARCH_MAX_N=(int, 12),
    TROPCP_LOG_LEVEL=(str, "WARNING"),
)
environ.Env.read_env(BASE_DIR / "../.env")

SECRET_KEY = env("SECRET_KEY", default="tropcp-local-only-not-secret")

DEBUG = env("DEBUG")

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "tropical_cp.core",
    "tropical_cp.graphs",
    "tropical_cp.ranks",
    "tropical_cp.cli",
]

DATABASES = {}

USE_TZ = True

# Exact search guards
TROPCP_THREADS = env("TROPCP_THREADS")
TROPCP_NODE_LIMIT = env("TROPCP_NODE_LIMIT")
TROPCP_TIMEOUT_S = env("TROPCP_TIMEOUT_S")
TROPCP_BLOCK_SEARCH_MAX_L = env("TROPCP_BLOCK_SEARCH_MAX_L")
TROPCP_BLOCK_SEARCH_NODE_LIMIT = env("TROPCP_BLOCK_SEARCH_NODE_LIMIT")
TROPCP_COVER_SEARCH_MAX_N = env("TROPCP_COVER_SEARCH_MAX_N")

# Reports go to stdout, so log records go to stderr.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "tropical_cp": {
            "handlers": ["console"],
            "level": env("TROPCP_LOG_LEVEL"),
        },
    },
}
