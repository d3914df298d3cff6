import os

import fudge
from django.conf import ENVIRONMENT_VARIABLE, LazySettings

from armstrong.labs.summability import global_settings
from armstrong.labs.summability.conf import (
    SEED_VAR, configure, settings, worker_count)
from armstrong.labs.summability.exceptions import ImproperlyConfigured
from ._utils import TestCase


class ConfigureTestCase(TestCase):
    def configured(self, environ):
        with fudge.patched_context(os, 'environ', environ):
            return configure(LazySettings())

    def test_defaults_come_from_global_settings(self):
        fresh = self.configured({})
        self.assertEqual(fresh.SEED, global_settings.SEED)
        self.assertEqual(fresh.TUPLE_BUDGET, 10 ** 8)
        self.assertIsNone(fresh.THREADS)

    def test_settings_module_from_environment(self):
        fresh = self.configured({ENVIRONMENT_VARIABLE: 'env_settings'})
        self.assertEqual(fresh.SEARCH_RESTARTS, 16)
        self.assertEqual(fresh.THREADS, 2)

    def test_settings_module_gaps_fall_back_to_defaults(self):
        fresh = self.configured({ENVIRONMENT_VARIABLE: 'env_settings'})
        self.assertEqual(fresh.TUPLE_BUDGET, global_settings.TUPLE_BUDGET)
        self.assertEqual(fresh.WEAK_NORM_BACKENDS_FIXTURE,
                         global_settings.WEAK_NORM_BACKENDS_FIXTURE)

    def test_configure_twice_is_harmless(self):
        with fudge.patched_context(os, 'environ', {}):
            fresh = configure(LazySettings())
            self.assertIs(configure(fresh), fresh)
        self.assertEqual(fresh.SEED, global_settings.SEED)

    def test_seed_from_environment(self):
        self.assertEqual(self.configured({SEED_VAR: '123'}).SEED, 123)

    def test_bad_seed_from_environment(self):
        with self.assertRaises(ImproperlyConfigured):
            self.configured({SEED_VAR: 'abc'})


class SettingsTestCase(TestCase):
    def test_package_settings_are_configured(self):
        self.assertTrue(settings.configured)
        self.assertTrue(hasattr(settings, 'VERTEX_MAX_DIM'))

    def test_unknown_setting(self):
        with self.assertRaises(AttributeError):
            settings.NOT_A_SETTING

    def test_override_restores(self):
        before = settings.SEED
        with self.settings(SEED=99, BRAND_NEW=1):
            self.assertEqual(settings.SEED, 99)
            self.assertEqual(settings.BRAND_NEW, 1)
        self.assertEqual(settings.SEED, before)
        self.assertFalse(hasattr(settings, 'BRAND_NEW'))

    def test_worker_count(self):
        with self.settings(THREADS=3):
            self.assertEqual(worker_count(), 3)
        with self.settings(THREADS=None):
            self.assertGreaterEqual(worker_count(), 1)
        with self.settings(THREADS=0):
            with self.assertRaises(ImproperlyConfigured):
                worker_count()
