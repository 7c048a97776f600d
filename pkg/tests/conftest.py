import pytest

from stringforge.sessions import SessionStore


@pytest.fixture
def store(tmp_path):
    return SessionStore(tmp_path / "sessions")


@pytest.fixture
def client(store):
    from fastapi.testclient import TestClient

    from stringforge.service import create_app

    return TestClient(create_app(store))
