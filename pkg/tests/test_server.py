import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from fdpenvelope import (Session, SessionConfig, build_preordered_path,
                         compute_envelope, constant_sel, vhat_sel)
from fdpenvelope.datasets import envelope_csv_text
from fdpenvelope.server import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


BODY = {
    "config": {"p_star": 0.5, "lambda": 0.5, "alpha": 0.1, "a": 1.0},
    "data": {"ids": ["g1", "g2", "g3"],
             "p": [0.01, 0.9, 0.3],
             "x": [5.0, 1.0, 3.0]},
}


def test_create_and_state(client):
    resp = client.post("/sessions", json=BODY)
    assert resp.status_code == 200
    session_id = resp.json()["session_id"]

    state = client.get(f"/sessions/{session_id}").json()
    assert [e["id"] for e in state["remaining"]] == ["g1", "g2", "g3"]
    assert state["constant"]["family"] == "sel"
    assert state["prefix"] == []
    # masked values only; 0.9 must not appear anywhere in the payload
    gp = {e["id"]: e["g_p"] for e in state["remaining"]}
    assert gp["g2"] == pytest.approx(0.1)
    assert "0.9" not in json.dumps(state)


def test_lambda_alias_and_plain_name(client):
    body = json.loads(json.dumps(BODY))
    body["config"] = {"p_star": 0.5, "lam": 0.5, "alpha": 0.1}
    assert client.post("/sessions", json=body).status_code == 200


def test_select_flow_and_conflicts(client):
    session_id = client.post("/sessions", json=BODY).json()["session_id"]
    out = client.post(f"/sessions/{session_id}/select", json={"id": "g1"})
    assert out.status_code == 200
    doc = out.json()
    assert doc["p_unmasked"] == 0.01 and doc["included"] is True
    assert doc["envelope_point"]["size"] == 1

    assert client.post(f"/sessions/{session_id}/select",
                       json={"id": "g1"}).status_code == 409
    assert client.post(f"/sessions/{session_id}/select",
                       json={"id": "zz"}).status_code == 404
    assert client.post("/sessions/nope/select",
                       json={"id": "g1"}).status_code == 404
    assert client.get("/sessions/nope").status_code == 404


def test_invalid_config_is_422(client):
    bad = json.loads(json.dumps(BODY))
    bad["config"]["lambda"] = 0.2  # below p_star
    assert client.post("/sessions", json=bad).status_code == 422
    worse = json.loads(json.dumps(BODY))
    worse["data"]["p"] = [0.01, 2.0, 0.3]
    assert client.post("/sessions", json=worse).status_code == 422


def test_envelope_csv_matches_library(client):
    session_id = client.post("/sessions", json=BODY).json()["session_id"]
    for hyp in ("g3", "g2", "g1"):
        client.post(f"/sessions/{session_id}/select", json={"id": hyp})
    resp = client.get(f"/sessions/{session_id}/envelope.csv")
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/csv")

    config = SessionConfig(p_star=0.5, lam=0.5, alpha=0.1)
    mirror = Session(["g1", "g2", "g3"], np.asarray([0.01, 0.9, 0.3]), config)
    for hyp in ("g3", "g2", "g1"):
        mirror.select_next(hyp)
    pi = [2, 1, 0]
    p = [0.01, 0.9, 0.3]
    curve = compute_envelope(build_preordered_path(p, pi, 0.5),
                             vhat_sel(p, pi, 0.5, 0.5),
                             constant_sel(0.1, 1.0, 1.0))
    assert resp.text == envelope_csv_text(curve)
