from __future__ import annotations

import pytest

from gradedcoh import catalog


@pytest.fixture(scope="session")
def cat() -> catalog.Catalog:
    return catalog.load_all()
