import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from annotator_service import EMOTION_LABELS, StubBackend, create_app

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "schemas" / "annotator_protocol.json").read_text())
FIXTURE_PATH = ROOT / "fixtures" / "stub_responses.json"


def validator(definition):
    schema = {"$ref": f"#/$defs/{definition}", "$defs": SCHEMA["$defs"]}
    return jsonschema.Draft202012Validator(schema)


@pytest.fixture(scope="module")
def client():
    backend = StubBackend.from_file(FIXTURE_PATH)
    with TestClient(create_app(backend), raise_server_exceptions=False) as test_client:
        yield test_client


@pytest.fixture(scope="module")
def fixture():
    return json.loads(FIXTURE_PATH.read_text())


class TestHealth:
    def test_health_ok(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        payload = response.json()
        validator("health_response").validate(payload)
        assert payload["models_loaded"] is True
        assert payload["mode"] == "stub"


class TestEmotions:
    def test_single_text_shape(self, client):
        response = client.post("/v1/emotions", json={"texts": ["anything at all"]})
        assert response.status_code == 200
        payload = response.json()
        validator("emotion_response").validate(payload)
        assert len(payload["results"]) == 1
        assert payload["results"][0]["label"] in EMOTION_LABELS

    def test_scripted_responses_exact(self, client, fixture):
        texts = list(fixture["emotions"])
        response = client.post("/v1/emotions", json={"texts": texts})
        assert response.status_code == 200
        expected = [fixture["emotions"][t] for t in texts]
        assert response.json() == {"results": expected}

    def test_order_preserved(self, client, fixture):
        texts = list(fixture["emotions"])
        reordered = list(reversed(texts))
        response = client.post("/v1/emotions", json={"texts": reordered})
        labels = [r["label"] for r in response.json()["results"]]
        assert labels == [fixture["emotions"][t]["label"] for t in reordered]

    def test_batch_limit_413(self, client):
        response = client.post("/v1/emotions", json={"texts": ["x"] * 65})
        assert response.status_code == 413
        payload = response.json()
        validator("error_response").validate(payload)
        assert payload["limit"] == 64

    def test_batch_of_64_accepted(self, client):
        response = client.post("/v1/emotions", json={"texts": ["x"] * 64})
        assert response.status_code == 200
        assert len(response.json()["results"]) == 64

    def test_malformed_body_400(self, client):
        for payload in ({}, {"texts": "not a list"}, {"texts": []}, {"wrong": ["x"]}):
            response = client.post("/v1/emotions", json=payload)
            assert response.status_code == 400, payload
            validator("error_response").validate(response.json())

    def test_empty_text_400(self, client):
        response = client.post("/v1/emotions", json={"texts": ["ok", "   "]})
        assert response.status_code == 400

    def test_deterministic_repeat(self, client):
        body = {"texts": ["I laugh about it now.", "unscripted"]}
        first = client.post("/v1/emotions", json=body)
        second = client.post("/v1/emotions", json=body)
        assert first.content == second.content


class TestDepression:
    def test_scripted_response_exact(self, client, fixture):
        text, expected = next(iter(fixture["depression"].items()))
        response = client.post("/v1/depression", json={"text": text})
        assert response.status_code == 200
        assert response.json() == expected
        validator("depression_response").validate(response.json())

    def test_empty_text_400(self, client):
        response = client.post("/v1/depression", json={"text": ""})
        assert response.status_code == 400

    def test_malformed_body_400(self, client):
        response = client.post("/v1/depression", json={"body": "x"})
        assert response.status_code == 400

    def test_default_for_unscripted(self, client, fixture):
        response = client.post("/v1/depression", json={"text": "never scripted"})
        assert response.status_code == 200
        assert response.json() == fixture["default_depression"]


class TestBackendFailure:
    def test_backend_exception_maps_to_503(self):
        class Broken:
            loaded = False
            mode = "stub"

            def emotions(self, texts):
                raise RuntimeError("weights missing")

            def depression(self, text):
                raise RuntimeError("weights missing")

        with TestClient(create_app(Broken()), raise_server_exceptions=False) as client:
            response = client.post("/v1/emotions", json={"texts": ["x"]})
            assert response.status_code == 503
            assert response.headers["Retry-After"] == "5"
            validator("error_response").validate(response.json())


class TestStubFixtureValidation:
    def test_fixture_rejects_unknown_emotion(self):
        with pytest.raises(ValueError):
            StubBackend({"emotions": {"x": {"label": "bliss", "score": 0.5}}})
