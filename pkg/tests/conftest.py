from __future__ import annotations

from functools import lru_cache

import pytest

from diffcharsq.complex_core import build_standard_space


@lru_cache(maxsize=None)
def cached_space(descriptor: str):
    """Spaces are shared across tests so their reductions and caches are reused."""
    return build_standard_space(descriptor)


@pytest.fixture(scope="session")
def space():
    return cached_space
