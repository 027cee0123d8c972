import pytest

from resloc.cache import UniversalCache


@pytest.fixture(scope="session")
def shared_cache(tmp_path_factory):
    """One disk-backed polynomial cache for the whole test session."""
    return UniversalCache(tmp_path_factory.mktemp("universal-cache"))
