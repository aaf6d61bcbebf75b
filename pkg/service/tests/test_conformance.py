"""The pipeline client run against the stub service, end to end.

The client package talks to the service only over HTTP: the ASGI transport
binds the two without a socket, keeping the conformance check hermetic.
"""

import json
from pathlib import Path

import httpx
import pytest
from fastapi.testclient import TestClient

from annotator_service import StubBackend, create_app

from emopairs.annotation import RemoteAnnotator, annotate_corpus
from emopairs.corpus import RawPost, segment_sentences

ROOT = Path(__file__).resolve().parents[1]
FIXTURE_PATH = ROOT / "fixtures" / "stub_responses.json"
CONFORMANCE = json.loads((ROOT / "fixtures" / "conformance.json").read_text())


@pytest.fixture(scope="module")
def annotator():
    # TestClient is a sync httpx.Client bound to the ASGI app: the pipeline
    # client speaks real HTTP semantics without a socket
    app = create_app(StubBackend.from_file(FIXTURE_PATH))
    client = TestClient(app, raise_server_exceptions=False)
    return RemoteAnnotator("http://annotator.test", client=client, backoff=0.0)


def conformance_posts():
    return [
        RawPost(
            id=post["id"],
            created_utc=post["created_utc"],
            title=post["title"],
            body=post["body"],
        )
        for post in CONFORMANCE["posts"]
    ]


class TestClientConformance:
    def test_scripted_labels_reproduced_exactly(self, annotator):
        posts = conformance_posts()
        segmented = [(post, segment_sentences(post)) for post in posts]
        annotated = annotate_corpus(segmented, annotator)
        assert [a.post_id for a in annotated] == [e["id"] for e in CONFORMANCE["expected"]]
        for result, expected in zip(annotated, CONFORMANCE["expected"]):
            assert [se.emotion for se in result.sentence_emotions] == expected["emotions"]
            assert [se.score for se in result.sentence_emotions] == expected["scores"]
            assert result.depression.label == expected["depression"]
            assert result.depression.score == expected["depression_score"]
            assert result.outcome == expected["outcome"]

    def test_health_reachable_through_client_transport(self, annotator):
        response = annotator._client.get("http://annotator.test/health")
        assert response.status_code == 200
        assert response.json()["mode"] == "stub"

    def test_oversize_batch_surfaces_as_backend_error(self, annotator):
        from emopairs.errors import AnnotationBackendError

        with pytest.raises(AnnotationBackendError):
            annotator._post("/v1/emotions", {"texts": ["x"] * 65})


class TestLiveServer:
    def test_uvicorn_roundtrip(self):
        # one real-socket smoke check; everything else stays in-process
        import socket
        import threading
        import time

        import uvicorn

        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]

        app = create_app(StubBackend.from_file(FIXTURE_PATH))
        config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        try:
            deadline = time.time() + 10
            url = f"http://127.0.0.1:{port}"
            while time.time() < deadline:
                try:
                    if httpx.get(url + "/health", timeout=1).status_code == 200:
                        break
                except httpx.TransportError:
                    time.sleep(0.05)
            else:
                pytest.fail("server did not come up")
            annotator = RemoteAnnotator(url)
            labels = annotator.emotions(["I laugh about it now."])
            assert labels == [("amusement", 0.93)]
        finally:
            server.should_exit = True
            thread.join(timeout=5)
