import pytest
from litestar.status_codes import HTTP_200_OK, HTTP_400_BAD_REQUEST, HTTP_404_NOT_FOUND
from litestar.testing import TestClient

from isospectral.api import app


@pytest.fixture
def client():
    with TestClient(app=app) as client:
        yield client


def test_root(client):
    response = client.get("/")
    assert response.status_code == HTTP_200_OK
    assert response.json()["tolerance_profile"] in {"strict", "default", "fast"}


def test_ground_qfi(client):
    response = client.get("/estimation/qfi", params={"lambda": 0})
    assert response.status_code == HTTP_200_OK
    body = response.json()
    assert body["value"] == pytest.approx(2.0 / 3.0)
    assert body["method"] == "pure-overlap"
    assert body["converged"] is True


def test_classical_fi(client):
    body = client.get("/estimation/cfi", params={"lambda": 1}).json()
    assert body["method"] == "classical-position"
    assert body["value"] == pytest.approx(2.0 / 3.0 / (1.0 + 2.0**0.5) ** 2, rel=1e-6)


def test_cramer_rao_bound(client):
    body = client.get("/estimation/crb", params={"lambda": 0, "M": 100}).json()
    assert body["repetitions"] == 100
    assert body["variance_bound"] == pytest.approx(0.015)
    assert body["signal_to_noise"] == 0.0


@pytest.mark.parametrize(
    ("path", "params"),
    [
        ("/estimation/qfi", {"lambda": -1}),
        ("/estimation/qfi", {"lambda": 1, "T": -0.5}),
        ("/estimation/crb", {"lambda": 1, "M": 0}),
        ("/measures", {"lambda": -5}),
        ("/measures", {"lambda": 1, "measures": "entanglement"}),
        ("/measures", {}),
    ],
)
def test_bad_requests(client, path, params):
    assert client.get(path, params=params).status_code == HTTP_400_BAD_REQUEST


def test_vacuum_fano_is_flagged(client):
    response = client.get("/measures", params={"lambda": 0, "measures": "fano,moments"})
    assert response.status_code == HTTP_200_OK
    body = response.json()
    assert body["fano"] is None
    assert body["flags"] == {"fano": "undefined"}
    assert body["var_x"] == pytest.approx(0.5)
    assert body["qfi"] is None


def test_photon_distribution(client):
    body = client.get("/measures/photon-distribution", params={"lambda": 0, "T": 0.5}).json()
    assert body["probabilities"][0] == pytest.approx(1.0 - 2.718281828459045**-2)
    assert body["mean"] == pytest.approx(1.0 / (2.718281828459045**2 - 1.0), rel=1e-8)
    assert body["converged"] is True


def test_figures(client):
    listing = client.get("/figures")
    assert listing.status_code == HTTP_200_OK
    assert "GNONG" in listing.json()
    body = client.get("/figures/isoSHO").json()
    assert body["figure"] == "isoSHO"
    assert len(body["rows"]) == 4 * 401
    assert set(body["rows"][0]) == {"lam", "x", "potential", "ground_wavefunction", "first_excited_wavefunction"}
    assert client.get("/figures/NOPE").status_code == HTTP_404_NOT_FOUND


def test_bound_matches_its_qfi(client):
    body = client.get("/estimation/crb", params={"lambda": 1, "M": 4}).json()
    assert body["variance_bound"] * body["qfi"] * 4 == pytest.approx(1.0)
    assert body["signal_to_noise"] == pytest.approx(body["qfi"])


def test_wavefunction_sample(client):
    response = client.get("/measures/wavefunction", params={"lambda": 0, "x": 0})
    assert response.status_code == HTTP_200_OK
    body = response.json()
    assert body["n"] == 0
    assert body["value"] == pytest.approx(0.7511255444649425)
    first = client.get("/measures/wavefunction", params={"lambda": 0, "x": 0, "n": 1}).json()
    assert first["value"] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("params", [{"lambda": -1, "x": 0}, {"lambda": 1, "x": 0, "n": -1}, {"lambda": 1}])
def test_wavefunction_bad_requests(client, params):
    assert client.get("/measures/wavefunction", params=params).status_code == HTTP_400_BAD_REQUEST
