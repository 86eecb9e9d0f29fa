'''Contains memoization logic for enumerated graph classes.

This module assumes a few things code-wise:
+   all cacheable functions are in fact generators
+   each item the generator yields is a separate cache item. its cache
    key is determined by the cache_key parameter in @cacheable
+   results are cached per argument tuple, so free_trees(7) and
    free_trees(8) are separate cache entries

As with any explicit cache, the generator itself stays undecorated in
behavior: calling it directly always regenerates, which is what the
enumeration tests want. Only collect_through_cache goes through the
cache.

There's no expiry here. Enumerated classes never change for a given n,
so once something is cached it's good for the lifetime of the process.
The caps in distinv.config are what keep memory bounded: the biggest
class we allow by default is the 853 connected graphs on 7 vertices.
'''

import functools
import logging
import types

logger = logging.getLogger(__name__)
_CACHE_TYPE_ATTR = '__enumeration_cache__'
_CACHE_KEYGEN_ATTR = '__enumeration_cache_key__'


def cacheable(cache_type, *, cache_key, callbacks=None):
    '''Decorator for marking a generator function as cacheable. Adds an
    instance of the desired cache_type to the function. cache_key
    specifies how to store each yielded item, either as a callable with
    one argument (the item to cache), or a string naming the attribute
    to use.

    Use like this:

        @cacheable(UpsertOnlyCache, cache_key=canonical_code)
        def generate_something(n):
            ...
    '''
    if isinstance(cache_key, str):
        @functools.wraps(getattr)
        def cache_keygenner(obj):
            return getattr(obj, cache_key)

    elif callable(cache_key):
        cache_keygenner = cache_key

    else:
        raise TypeError('cache_key must be string or callable')

    def decorator(gen_fn):
        setattr(gen_fn, _CACHE_TYPE_ATTR, cache_type(callbacks=callbacks))
        setattr(gen_fn, _CACHE_KEYGEN_ATTR, cache_keygenner)
        return gen_fn

    return decorator


class UpsertOnlyCache:
    '''An appendable cache of generator results, one entry per argument
    tuple. Entries can be inserted and replaced, but never removed.

    Callbacks are called with (cache, args) after every update, which is
    where a class built on top of another class can hook in.
    '''

    def __init__(self, *args, callbacks=None, **kwargs):
        super().__init__(*args, **kwargs)
        # Not a dict subclass on purpose: every mutation has to go through
        # update() so the callbacks fire
        self._cache = {}
        if callbacks is None:
            self._callbacks = []
        else:
            self._callbacks = list(callbacks)

    def needs_update(self, args):
        '''Checks to see if we have anything cached for args.'''
        return args not in self._cache

    def update(self, args, items):
        '''Store items (a key -> item mapping) for args.'''
        self._cache[args] = types.MappingProxyType(dict(items))

        for callback in self._callbacks:
            callback(self, args)

    def get(self, args, default=None):
        '''Read-only view of the entry for args, or default.'''
        return self._cache.get(args, default)

    @property
    def cached_args(self):
        return tuple(self._cache)


def get_cache(cacheable_fn):
    cache = getattr(cacheable_fn, _CACHE_TYPE_ATTR, None)
    if cache is None:
        raise TypeError(
            'Must decorate with @cacheable to get_cache!')
    return cache


def collect_through_cache(cacheable_fn, *args):
    '''Gets the results of cacheable_fn(*args), which must be a
    generator function decorated with @cacheable. Returns a read-only
    key -> item mapping, in the order the generator yielded them. Runs
    the generator only the first time a given args tuple is requested.

    Note that if two yielded items share a key, the later one wins, so
    a cache key of canonical_code doubles as isomorphism deduplication.
    '''
    cache = getattr(cacheable_fn, _CACHE_TYPE_ATTR, None)
    keygenner = getattr(cacheable_fn, _CACHE_KEYGEN_ATTR, None)
    if cache is None or keygenner is None:
        raise TypeError(
            'Must decorate with @cacheable to collect_through_cache!')

    if cache.needs_update(args):
        logger.debug('Cache miss for %s%s', cacheable_fn.__name__, args)
        cache.update(
            args, {keygenner(item): item for item in cacheable_fn(*args)})

    return cache.get(args)
