"""
Settings live on `django.conf.settings`.

With DJANGO_SETTINGS_MODULE set, that module is used and any of our names
it leaves out fall back to `global_settings`. Without it, Django is
configured from `global_settings` alone. SUMMLAB_SEED replaces SEED in
either case.

"""
import os

from django.conf import ENVIRONMENT_VARIABLE, settings

from . import global_settings
from .exceptions import ImproperlyConfigured

SEED_VAR = 'SUMMLAB_SEED'


def defaults():
    return dict((name, getattr(global_settings, name))
                for name in dir(global_settings) if name.isupper())


def configure(lazy_settings=None):
    lazy_settings = lazy_settings if lazy_settings is not None else settings
    if not lazy_settings.configured and not os.environ.get(ENVIRONMENT_VARIABLE):
        lazy_settings.configure(**defaults())
    for name, value in defaults().items():
        if not hasattr(lazy_settings, name):
            setattr(lazy_settings, name, value)

    env_seed = os.environ.get(SEED_VAR)
    if env_seed:
        try:
            lazy_settings.SEED = int(env_seed)
        except ValueError:
            raise ImproperlyConfigured(
                '%s must be an integer, got "%s"' % (SEED_VAR, env_seed))
    return lazy_settings


def worker_count():
    """Worker count; THREADS=None means one per CPU"""
    if settings.THREADS is None:
        return os.cpu_count() or 1
    if int(settings.THREADS) < 1:
        raise ImproperlyConfigured('THREADS must be at least 1')
    return int(settings.THREADS)


configure()
