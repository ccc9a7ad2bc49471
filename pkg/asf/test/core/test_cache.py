import unittest

from asf.core import ResponseCache, CacheError


class TestResponseCache(unittest.TestCase):

    def setUp(self):
        self._cache = ResponseCache(capacity=2)

    def test_hit_within_ttl(self):
        self._cache.put('a', 1, now=100.0)
        self.assertEqual(self._cache.get('a', now=160.0, ttl=60), (True, 1))
        self.assertEqual(self._cache.hits, 1)

    def test_expired_item_is_dropped(self):
        self._cache.put('a', 1, now=100.0)
        self.assertEqual(self._cache.get('a', now=160.5, ttl=60), (False, None))
        self.assertNotIn('a', self._cache)
        self.assertEqual(self._cache.misses, 1)

    def test_least_recently_used_is_evicted(self):
        self._cache.put('a', 1, now=0.0)
        self._cache.put('b', 2, now=0.0)
        self._cache.get('a', now=1.0, ttl=60)
        self._cache.put('c', 3, now=2.0)
        self.assertIn('a', self._cache)
        self.assertNotIn('b', self._cache)
        self.assertEqual(len(self._cache), 2)

    def test_clear(self):
        self._cache.put('a', 1, now=0.0)
        self._cache.clear()
        self.assertEqual(len(self._cache), 0)

    def test_capacity_must_be_positive(self):
        with self.assertRaises(CacheError):
            ResponseCache(capacity=0)
