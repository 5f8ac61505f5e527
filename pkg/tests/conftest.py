from __future__ import annotations

import pytest

from fusionmod.alcove import LevelRank, enumerate_alcove, weight
from fusionmod.modular import modular_data


@pytest.fixture(autouse=True)
def _no_cache_env(monkeypatch):
    monkeypatch.delenv("FUSIONMOD_CACHE", raising=False)


@pytest.fixture
def w():
    """Build a weight from short rows: w(n, k, [rows])."""
    return lambda n, k, rows=(): weight(LevelRank(n, k), rows)


@pytest.fixture(scope="session")
def ctx66():
    return LevelRank(6, 6)


@pytest.fixture(scope="session")
def alcove66(ctx66):
    return enumerate_alcove(ctx66)


@pytest.fixture(scope="session")
def modular_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("modular")


@pytest.fixture(scope="session")
def md(modular_cache):
    """Session-cached modular data keyed by (n, k)."""
    built = {}

    def get(n, k):
        if (n, k) not in built:
            built[(n, k)] = modular_data(LevelRank(n, k), modular_cache)
        return built[(n, k)]

    return get
