import functools

import pydantic.typing
import pytest

from distinv.config import get_settings
from distinv.families import make_spider


@pytest.fixture(autouse=True)
def fixup_pydantic(monkeypatch):
    '''Pydantic tries to get smart about checking sys.modules for
    resolving type annotations, which doesn't play nicely with pytest
    when a test module defines its own models.
    '''
    @functools.wraps(pydantic.typing.resolve_annotations)
    def resolve_annotations_fixup(
        raw_annotations, module_name,
        _early_bound_original_function=pydantic.typing.resolve_annotations
    ):
        '''Strip any module name that starts with 'test_', since it
        won't exist. Quick and dirty, but fine as long as we keep to a
        test_X naming convention.
        '''
        if module_name and module_name.startswith('test_'):
            module_name = None

        # Patched in below, so this has to be early bound or we recurse
        return _early_bound_original_function(raw_annotations, module_name)

    # pydantic.main has its own reference to resolve_annotations
    monkeypatch.setattr(
        pydantic.typing, 'resolve_annotations', resolve_annotations_fixup)
    monkeypatch.setattr(
        pydantic.main, 'resolve_annotations', resolve_annotations_fixup)


@pytest.fixture(autouse=True)
def fresh_settings():
    '''Settings are cached per process; tests that monkeypatch DIT_*
    variables need a fresh read.
    '''
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def star4():
    '''K_{1,3}: center 0, leaves 1, 2, 3.'''
    return make_spider((1, 1, 1))
