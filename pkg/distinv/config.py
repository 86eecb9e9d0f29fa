'''Runtime configuration. Everything here can be overridden through the
environment with a DIT_ prefix, eg DIT_JOBS=4. The CLI flags take
precedence over the environment where both exist.
'''
import functools

from pydantic import BaseSettings
from pydantic import conint

TOOL_VERSION = '0.1.0'


class Settings(BaseSettings):
    jobs: conint(ge=1) = 1
    # Enumeration caps. Note that these are per graph class, and the
    # connected override is only honored with an explicit --allow-large
    tree_cap: conint(ge=1) = 16
    connected_cap: conint(ge=1) = 7
    connected_override_cap: conint(ge=1) = 8
    # Non-tree canonical codes search orderings, so they get their own cap
    canonical_cap: conint(ge=1) = 10
    log_level: str = 'WARNING'

    class Config:
        env_prefix = 'DIT_'


@functools.lru_cache(maxsize=None)
def get_settings():
    '''Process-wide settings instance. Tests that monkeypatch the
    environment need to call get_settings.cache_clear() first.
    '''
    return Settings()
