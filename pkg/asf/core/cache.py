import logging
import threading

from collections import OrderedDict

__all__ = ['ResponseCache', 'CacheError']

logger = logging.getLogger(__name__)


class CacheError(Exception):
    pass


class ResponseCache(object):
    """
    Least-recently-used response cache whose entries expire after a per-lookup time to live.

    Times are plain numbers (seconds) supplied by the caller, so the cache never reads a clock
    itself.
    """

    def __init__(self, capacity=1024):
        if capacity < 1:
            raise CacheError("Cache capacity must be at least 1, got {}!".format(capacity))
        self._capacity = int(capacity)
        self._items = OrderedDict()  # key -> (stored_at, response)
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._items)

    def __contains__(self, key):
        return key in self._items

    @property
    def capacity(self):
        return self._capacity

    def get(self, key, now, ttl):
        """
        Return ``(True, response)`` if `key` was stored at most `ttl` seconds before `now`,
        else ``(False, None)``. Expired items are dropped.
        """
        with self._lock:
            _item = self._items.get(key)
            if _item is not None:
                _stored_at, _response = _item
                if now - _stored_at <= ttl:
                    self._items.move_to_end(key)
                    self.hits += 1
                    return True, _response
                del self._items[key]
            self.misses += 1
            return False, None

    def put(self, key, response, now):
        with self._lock:
            self._items[key] = (now, response)
            self._items.move_to_end(key)
            while len(self._items) > self._capacity:
                _evicted, _ = self._items.popitem(last=False)
                logger.debug("Evicted least recently used response %r", _evicted)

    def clear(self):
        with self._lock:
            self._items.clear()
            self.hits = self.misses = 0
