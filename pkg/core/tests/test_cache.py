"""
Cache Tests
-----------
Key building, get_or_set and the derived-model cache.

Tests:
- Cache hits and misses
- Degradation to direct computation when the backend fails
- Content-addressed keys for derived models
"""
import dataclasses
from pathlib import Path
from unittest.mock import patch

from django.conf import settings
from django.core.cache import cache
from django.test import SimpleTestCase

from apps.mdp.services.loader import load_mdp_spec
from apps.mdp.services.model import cached_derived_model
from core.cache_utils import CacheKeyBuilder, CacheManager, CacheNamespaces


class CacheKeyBuilderTests(SimpleTestCase):
    """Test cache key building"""

    def test_build_simple_key(self):
        """Test namespace and positional parts joined by colons"""
        self.assertEqual(CacheKeyBuilder.build('mdp:derived', 'abc'), 'mdp:derived:abc')

    def test_kwargs_order_does_not_matter(self):
        """Test keyword parts are sorted"""
        self.assertEqual(
            CacheKeyBuilder.build('mdp', n=3, clip=9.0),
            CacheKeyBuilder.build('mdp', clip=9.0, n=3),
        )

    def test_build_long_key_hashing(self):
        """Test that long keys are hashed and keep their namespace"""
        key = CacheKeyBuilder.build('mdp', 'x' * 250)
        self.assertLess(len(key), 250)
        self.assertTrue(key.startswith('mdp:'))


class CacheManagerTests(SimpleTestCase):
    """Test cache management operations"""

    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_get_or_set_cache_miss(self):
        """Test get_or_set computes once on a miss"""
        calls = []
        result = CacheManager.get_or_set('test_key', lambda: calls.append(1) or 'computed', timeout=60)
        self.assertEqual(result, 'computed')
        self.assertEqual(len(calls), 1)
        self.assertEqual(cache.get('test_key'), 'computed')

    def test_get_or_set_cache_hit(self):
        """Test get_or_set skips the computation on a hit"""
        cache.set('test_key', 'cached', 60)
        calls = []
        self.assertEqual(CacheManager.get_or_set('test_key', lambda: calls.append(1) or 'computed'), 'cached')
        self.assertEqual(calls, [])

    def test_backend_failure_degrades(self):
        """Test a failing backend falls back to direct computation"""
        with patch('core.cache_utils.cache') as broken:
            broken.get.side_effect = ConnectionError('backend down')
            self.assertEqual(CacheManager.get_or_set('k', lambda: 42), 42)

    def test_set_failure_keeps_value(self):
        """Test a failing set still returns the computed value"""
        with patch('core.cache_utils.cache') as broken:
            broken.get.return_value = None
            broken.set.side_effect = TypeError('cannot pickle')
            self.assertEqual(CacheManager.get_or_set('k', lambda: 'value'), 'value')

    def test_delete(self):
        """Test delete removes the key"""
        cache.set('gone', 1, 60)
        CacheManager.delete('gone')
        self.assertIsNone(cache.get('gone'))


class DerivedModelCacheTests(SimpleTestCase):
    """Test content-addressed derived models"""

    def setUp(self):
        cache.clear()

    def tearDown(self):
        cache.clear()

    def test_same_file_derived_once(self):
        """Test a second load of the same file hits the cache"""
        spec = load_mdp_spec(Path(settings.MDP_FIXTURE_DIR) / 'mdp_d.json')
        key = CacheKeyBuilder.build(CacheNamespaces.DERIVED_MODEL, spec.content_hash)
        self.assertIsNone(cache.get(key))

        first = cached_derived_model(spec)
        self.assertIsNotNone(cache.get(key))
        with patch('apps.mdp.services.model.derived_model') as derive:
            second = cached_derived_model(spec)
            derive.assert_not_called()
        self.assertEqual(first.d_beta.tolist(), second.d_beta.tolist())

    def test_unhashed_spec_bypasses_cache(self):
        """Test specs built in memory are never cached"""
        spec = load_mdp_spec(Path(settings.MDP_FIXTURE_DIR) / 'mdp_d.json')
        spec = dataclasses.replace(spec, content_hash='')
        with patch('apps.mdp.services.model.CacheManager.get_or_set') as get_or_set:
            cached_derived_model(spec)
            get_or_set.assert_not_called()
