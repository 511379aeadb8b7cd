import logging
from threading import Lock

logger = logging.getLogger(__name__)


class WriteOnceCache:
    """Thread-safe memo where the first stored value for a key wins."""

    def __init__(self):
        self._values = {}
        self._lock = Lock()

    def get(self, key):
        with self._lock:
            if key in self._values:
                return self._values[key], True
            return None, False

    def set(self, key, value):
        with self._lock:
            return self._values.setdefault(key, value)

    def get_or_compute(self, key, compute):
        value, hit = self.get(key)
        if hit:
            return value
        logger.debug(f"cache miss for {key}")
        return self.set(key, compute())
