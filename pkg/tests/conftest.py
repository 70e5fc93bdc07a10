import pytest

from dmcount import create_app
from dmcount.config import EngineConfig
from dmcount.services.abelian import GroupType
from dmcount.services.oracle import lattice_for


@pytest.fixture
def config():
    return EngineConfig()


@pytest.fixture
def app(monkeypatch):
    monkeypatch.delenv("DM_ORACLE_CAP", raising=False)
    monkeypatch.delenv("DM_AUT_ORACLE_CAP", raising=False)
    app = create_app()
    app.config["TESTING"] = True
    return app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture(scope="session")
def worked_example():
    """Lattice of Z2 x Z4^3, the group whose section classes are tabulated in docs/formulas.md."""
    return lattice_for(GroupType.of({2: (1, 2, 2, 2)}))
