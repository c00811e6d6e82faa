from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from adelab.api.deps import get_settings
from adelab.config import Settings
from adelab.main import app
from adelab.services import linear_ode


@pytest.fixture
def client():
    app.dependency_overrides[get_settings] = lambda: Settings(threads=1)
    with TestClient(app) as c:
        yield c
    app.dependency_overrides.clear()


def test_root(client):
    r = client.get("/")
    assert r.status_code == 200
    assert r.json()["service"] == "adelab API"


def test_curvature_test(client):
    r = client.post("/api/pcurv/test", json={"ode": "lame", "params": "n=1/6,B=0,g2=0,g3=1", "p": 5, "k": 6})
    assert r.status_code == 200
    body = r.json()
    assert body["command"] == "pcurv test"
    assert body["result"]["status"] == "NonZero"
    assert body["result"]["m"] == linear_ode.mpk(5, 6)


def test_scan_and_density(client):
    r = client.post("/api/pcurv/scan", json={"ode": "hyp", "params": "a=1/2,b=1/2,c=1", "pmax": 30})
    assert r.status_code == 200
    assert r.json()["result"]["ring"] == [2]
    assert r.json()["result"]["good"] == []
    r = client.post("/api/pcurv/density", json={"ode": "quadratic", "params": "d=2", "pmax": 23})
    assert r.json()["result"]["density"] == "3/8"


def test_domain_error_is_400(client):
    r = client.post("/api/pcurv/test", json={"ode": "lame", "params": "n=1/6", "p": 5})
    assert r.status_code == 400
    assert "detail" in r.json()
    r = client.get("/api/mf/eisenstein", params={"weight": 5})
    assert r.status_code == 400


def test_validation_error_is_422(client):
    r = client.post("/api/pcurv/test", json={"ode": "bessel", "p": 5})
    assert r.status_code == 422
    r = client.get("/api/ec/count", params={"p": 3, "t2": 1, "t3": 1})
    assert r.status_code == 422


def test_eisenstein(client):
    r = client.get("/api/mf/eisenstein", params={"weight": 4, "order": 3})
    assert r.status_code == 200
    result = r.json()["result"]
    assert [Fraction(c) for c in result["coefficients"]] == [1, 240, 2160, 6720]
    assert result["decomposition"] == "1/1*Q"


def test_pclosed(client):
    r = client.post("/api/vf/pclosed", json={"field": "x;y", "vars": "x,y", "p": 5})
    assert r.json()["result"]["records"] == [{"p": 5, "status": "Collinear"}]
    r = client.post("/api/vf/bianchini", json={"p": 7})
    assert r.json()["result"]["holds"] is True


def test_hodge(client):
    r = client.get("/api/hodge/codim", params={"n": 6, "d": 3, "m": 0})
    assert r.json()["result"]["codim"] == 8
    r = client.get("/api/hodge/table")
    assert r.json()["result"]["rows"][1] == {"n": 6, "dimT": 56, "min": 4, "max": 8, "L": 4, "M": 7}
    r = client.post("/api/hodge/series", json={"beta": [0, 0, 0, 0], "monomials": [[1, 1, 1, 1]], "trunc": 3})
    assert r.json()["result"]["coefficients"] == {"1": "1/1"}


def test_algfun(client):
    r = client.post("/api/algfun/taylor", json={"poly": "y^2 - 1 - z", "y0": 1, "order": 3})
    result = r.json()["result"]
    assert result["certified"] is True
    assert result["coefficients"]["1"] == "1/2"
    r = client.get("/api/algfun/binomring", params={"a": "1/3", "kmax": 6})
    assert r.json()["result"]["prime_support"] == [3]
