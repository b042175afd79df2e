"""
Django settings for the M3D NoC design-space exploration toolkit.

The project runs as a batch tool: every entry point is a management command,
so there are no URLs, middleware or database.
"""

import os
from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Initialize environment variables
env = environ.Env(
    DEBUG=(bool, False),
    M3D_NOC_LOG=(str, "WARNING"),
    M3D_NOC_JOBS=(int, 1),
    M3D_NOC_BRUTE_LIMIT=(int, 10**7),
)
# Read .env file
environ.Env.read_env(os.path.join(BASE_DIR, ".env"))

SECRET_KEY = env("SECRET_KEY", default="m3d-noc-batch-tool")

DEBUG = env("DEBUG")

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third Party Apps
    "rest_framework",
    # Local Apps
    "noc.common",
    "noc.timing",
    "noc.designs",
    "noc.routing",
    "noc.topology",
    "noc.search",
    "noc.experiments",
]

DATABASES = {}

USE_TZ = True

REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
}

NOC = {
    "JOBS": env("M3D_NOC_JOBS"),
    "BRUTE_LIMIT": env("M3D_NOC_BRUTE_LIMIT"),
}

LOG_LEVEL = env("M3D_NOC_LOG").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "stderr": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "noc": {"handlers": ["stderr"], "level": LOG_LEVEL, "propagate": False},
    },
}
