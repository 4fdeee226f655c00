"""
Cache Utilities
---------------
Centralized cache management for derived models.

Features:
- Safe cache operations with graceful degradation
- Consistent, namespaced cache key generation
- Content-addressed keys so a changed fixture never hits a stale entry
"""
import hashlib
import json
import logging
from typing import Any, Callable, Optional

from django.conf import settings
from django.core.cache import cache

logger = logging.getLogger(__name__)


class CacheKeyBuilder:
    """Build consistent, namespaced cache keys"""

    @staticmethod
    def build(namespace: str, *args, **kwargs) -> str:
        """
        Build a cache key from namespace and arguments.

        Args:
            namespace: Primary namespace (e.g., 'mdp')
            *args: Positional arguments to include in key
            **kwargs: Keyword arguments to include in key

        Returns:
            A cache key string, hashed if longer than 200 characters
        """
        parts = [namespace]
        parts.extend(str(arg) for arg in args)

        if kwargs:
            # Sort kwargs for consistent hashing
            parts.append(json.dumps(sorted(kwargs.items()), sort_keys=True))

        key_string = ":".join(parts)

        if len(key_string) > 200:
            key_hash = hashlib.md5(key_string.encode()).hexdigest()
            return f"{namespace}:{key_hash}"

        return key_string


class CacheManager:
    """High-level cache management operations"""

    @staticmethod
    def get_or_set(key: str, callable_func: Callable, timeout: Optional[int] = None) -> Any:
        """
        Get from cache or set if not exists.

        Args:
            key: Cache key
            callable_func: Function to call if cache miss
            timeout: Cache timeout in seconds

        Returns:
            Cached or freshly computed value
        """
        try:
            value = cache.get(key)
        except Exception as e:
            logger.error(f"Cache error for key {key}: {e}")
            return callable_func()

        if value is not None:
            logger.debug(f"Cache hit: {key}")
            return value

        logger.debug(f"Cache miss: {key}")
        value = callable_func()

        if value is not None:
            timeout = timeout or settings.CACHE_TTL['MEDIUM']
            try:
                cache.set(key, value, timeout)
                logger.debug(f"Cache set: {key} (TTL: {timeout}s)")
            except Exception as e:
                # Unpicklable or backend down: keep the computed value
                logger.error(f"Cache set failed for key {key}: {e}")

        return value

    @staticmethod
    def delete(key: str) -> None:
        try:
            cache.delete(key)
        except Exception as e:
            logger.error(f"Cache delete failed for key {key}: {e}")


class CacheNamespaces:
    """Cache namespaces"""
    DERIVED_MODEL = "mdp:derived"
