import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "message" in response.json()


def test_list_kinds(client):
    kinds = client.get("/api/triangles").json()
    assert "cycle" in kinds
    assert "quasi-subset" in kinds


def test_triangle(client):
    response = client.get("/api/triangles/cycle", params={"r": 2, "n_max": 5})
    assert response.status_code == 200
    body = response.json()
    assert body["rows"][5] == [0, 120, 924, 2380, 2520, 945]
    assert body["reversed"] is False


def test_triangle_unknown_kind(client):
    response = client.get("/api/triangles/bogus")
    assert response.status_code == 400
    assert "bogus" in response.json()["detail"]


def test_triangle_row_cap(client):
    assert client.get("/api/triangles/cycle", params={"n_max": 500}).status_code == 422


def test_tp(client):
    body = client.get("/api/tp/cycle", params={"r": 4, "size": 4, "reversed": True}).json()
    assert body["status"] == "falsified"
    assert body["witness"]["value"] == -7076160


def test_hankel(client):
    body = client.get("/api/hankel/cycle", params={"r": 2, "size": 3, "minor_order": 3}).json()
    assert body["status"] == "verified-to-cap"


def test_hankel_guard(client, monkeypatch):
    monkeypatch.setenv("STIRLING_MINOR_SEARCH_LIMIT", "1")
    response = client.get("/api/hankel/cycle", params={"r": 2, "size": 3, "minor_order": 3})
    assert response.status_code == 422


def test_roots(client):
    body = client.get("/api/roots/subset", params={"r": 2, "n_max": 8}).json()
    assert [claim["status"] for claim in body] == ["verified-to-cap"]


def test_certificates(client):
    body = client.get("/api/roots/cycle2/certificates", params={"n_max": 6}).json()
    assert [cert["n"] for cert in body] == list(range(1, 7))
    assert all(cert["all_real"] for cert in body)
    assert body[0]["interval"] == ["-1", "0"]


def test_certificates_unknown_family(client):
    assert client.get("/api/roots/cycle9/certificates").status_code == 400


def test_oracle(client):
    assert "II" in client.get("/api/oracle").json()
    body = client.get("/api/oracle/IV", params={"n_max": 4}).json()
    assert body["passed"]
    assert client.get("/api/oracle/IV", params={"n_max": 9}).status_code == 422
