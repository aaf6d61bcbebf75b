import json
import threading

import httpx
import pytest

from emopairs.annotation import (
    AnnotatedPost,
    DepressionLabel,
    LexiconAnnotator,
    RemoteAnnotator,
    SentenceEmotion,
    annotate_corpus,
    binarize_depression,
    lexicon_annotate,
    load_annotations,
    save_annotations,
)
from emopairs.corpus import RawPost, segment_sentences
from emopairs.errors import AnnotationBackendError, SchemaViolationError

from conftest import make_post


def segmented(post):
    return (post, segment_sentences(post))


class TestLexicon:
    def test_case_insensitive_match(self):
        assert lexicon_annotate("I am so ANGRY today", [("angry", "anger")]) == "anger"

    def test_fallback_neutral(self):
        assert lexicon_annotate("nothing matches", [("angry", "anger")]) == "neutral"

    def test_first_match_wins(self):
        rules = [("sad", "sadness"), ("sadly", "grief")]
        assert lexicon_annotate("sadly", rules) == "sadness"

    def test_empty_rules_rejected(self):
        with pytest.raises(ValueError):
            lexicon_annotate("x", [])

    def test_pure_function(self):
        rules = [("cried", "sadness")]
        assert all(lexicon_annotate("she cried", rules) == "sadness" for _ in range(3))

    def test_unknown_emotion_in_rules(self):
        with pytest.raises(ValueError):
            LexiconAnnotator([("x", "happyness")])


class TestBinarize:
    @pytest.mark.parametrize(
        "label,policy,expected",
        [
            ("not_depressed", "moderate_or_severe", 0),
            ("moderate", "moderate_or_severe", 1),
            ("severe", "moderate_or_severe", 1),
            ("not_depressed", "severe_only", 0),
            ("moderate", "severe_only", 0),
            ("severe", "severe_only", 1),
        ],
    )
    def test_policies(self, label, policy, expected):
        assert binarize_depression(label, policy) == expected
        assert binarize_depression(DepressionLabel(label, 0.9), policy) == expected

    def test_stable_under_recomputation(self):
        label = DepressionLabel("moderate", 0.7)
        first = binarize_depression(label, "moderate_or_severe")
        assert binarize_depression(label, "moderate_or_severe") == first

    def test_unknown_label(self):
        with pytest.raises(ValueError):
            binarize_depression("mild")


class TestAnnotateCorpus:
    def test_lexicon_two_sentences(self):
        post = RawPost(id="p", created_utc=0, title="", body="She cried. Fine.")
        annotator = LexiconAnnotator([("cried", "sadness")])
        [annotated] = annotate_corpus([segmented(post)], annotator)
        assert [se.emotion for se in annotated.sentence_emotions] == ["sadness", "neutral"]
        assert annotated.depression.label == "not_depressed"
        assert annotated.outcome == 0

    def test_empty_corpus(self):
        annotator = LexiconAnnotator([("x", "anger")])
        assert annotate_corpus([], annotator) == []

    def test_every_sentence_labeled_once(self):
        posts = [
            RawPost(id=f"p{i}", created_utc=i, title="Head", body="One. Two! Three?")
            for i in range(5)
        ]
        annotator = LexiconAnnotator([("one", "joy"), ("two", "fear")])
        annotated = annotate_corpus([segmented(p) for p in posts], annotator)
        for post, result in zip(posts, annotated):
            sentences = segment_sentences(post)
            assert [se.index for se in result.sentence_emotions] == [s.index for s in sentences]

    def test_depression_rules_drive_outcome(self):
        post = RawPost(id="p", created_utc=0, title="", body="I feel hopeless.")
        annotator = LexiconAnnotator(
            [("hopeless", "sadness")], [("hopeless", "severe")]
        )
        [annotated] = annotate_corpus([segmented(post)], annotator, policy="severe_only")
        assert annotated.depression.label == "severe"
        assert annotated.outcome == 1

    def test_output_order_matches_input_under_concurrency(self):
        posts = [
            RawPost(id=f"p{i:03d}", created_utc=i, title="", body=f"text {i}.")
            for i in range(40)
        ]
        annotator = LexiconAnnotator([("text", "approval")])
        annotated = annotate_corpus([segmented(p) for p in posts], annotator, concurrency=8)
        assert [a.post_id for a in annotated] == [p.id for p in posts]


class TestLabeledFileRoundTrip:
    def corpus(self):
        return [
            make_post("a", ["anger", "sadness"], 1),
            make_post("b", ["joy"], 0),
            make_post("c", [], 0),
            make_post("d", ["grief", "grief", "amusement"], 1),
            make_post("e", ["neutral"], 0, DepressionLabel("severe", 0.25)),
        ]

    def test_roundtrip_identity(self, tmp_path):
        path = tmp_path / "labeled.jsonl"
        corpus = self.corpus()
        save_annotations(corpus, path)
        assert load_annotations(path) == corpus

    def test_unknown_emotion_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = {
            "id": "a",
            "outcome": 0,
            "depression": "not_depressed",
            "sentences": [{"i": 0, "emotion": "joy", "score": 1.0}],
        }
        bad = dict(good, id="b", sentences=[{"i": 0, "emotion": "happyness", "score": 1.0}])
        path.write_text(json.dumps(good) + "\n" + json.dumps(bad) + "\n", encoding="utf-8")
        with pytest.raises(SchemaViolationError) as excinfo:
            load_annotations(path)
        assert excinfo.value.line == 2
        assert "happyness" in str(excinfo.value)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert load_annotations(path) == []

    def test_missing_depression_score_defaults(self, tmp_path):
        path = tmp_path / "minimal.jsonl"
        record = {"id": "a", "outcome": 1, "depression": "moderate", "sentences": []}
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        [post] = load_annotations(path)
        assert post.depression == DepressionLabel("moderate", 1.0)

    def test_bad_outcome_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        record = {"id": "a", "outcome": 2, "depression": "moderate", "sentences": []}
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        with pytest.raises(SchemaViolationError):
            load_annotations(path)


def protocol_handler(emotion_for, depression_for, *, fail_first=0):
    """In-test stub implementing the annotator HTTP protocol."""
    failures = {"remaining": fail_first}
    lock = threading.Lock()

    def handle(request: httpx.Request) -> httpx.Response:
        with lock:
            if failures["remaining"] > 0:
                failures["remaining"] -= 1
                return httpx.Response(503, json={"error": "warming up"})
        payload = json.loads(request.content)
        if request.url.path == "/v1/emotions":
            results = [
                {"label": emotion_for(text), "score": 0.9} for text in payload["texts"]
            ]
            return httpx.Response(200, json={"results": results})
        if request.url.path == "/v1/depression":
            label = depression_for(payload["text"])
            return httpx.Response(200, json={"label": label, "score": 0.8, "truncated": False})
        return httpx.Response(404, json={"error": "no such route"})

    return handle


def mock_annotator(handler, **kwargs):
    client = httpx.Client(transport=httpx.MockTransport(handler))
    return RemoteAnnotator("http://annotator.test", client=client, backoff=0.0, **kwargs)


class TestRemoteAnnotator:
    def test_scripted_labels_reproduced(self):
        script = {"She cried.": "sadness", "Fine.": "neutral", "Head": "curiosity"}
        annotator = mock_annotator(
            protocol_handler(lambda t: script.get(t, "neutral"), lambda t: "moderate")
        )
        posts = [
            RawPost(id="p1", created_utc=0, title="Head", body="She cried."),
            RawPost(id="p2", created_utc=1, title="", body="Fine."),
            RawPost(id="p3", created_utc=2, title="", body="She cried. Fine."),
        ]
        annotated = annotate_corpus([segmented(p) for p in posts], annotator)
        assert [se.emotion for se in annotated[0].sentence_emotions] == ["curiosity", "sadness"]
        assert [se.emotion for se in annotated[1].sentence_emotions] == ["neutral"]
        assert [se.emotion for se in annotated[2].sentence_emotions] == ["sadness", "neutral"]
        assert all(a.depression.label == "moderate" for a in annotated)
        assert all(a.outcome == 1 for a in annotated)

    def test_batches_preserve_order(self):
        seen_batches = []

        def handler(request):
            payload = json.loads(request.content)
            if request.url.path == "/v1/emotions":
                seen_batches.append(len(payload["texts"]))
                results = [{"label": "approval", "score": 0.5} for _ in payload["texts"]]
                return httpx.Response(200, json={"results": results})
            return httpx.Response(200, json={"label": "not_depressed", "score": 0.5})

        annotator = mock_annotator(handler)
        labels = annotator.emotions([f"s{i}" for i in range(130)])
        assert len(labels) == 130
        assert seen_batches == [64, 64, 2]

    def test_retry_then_success(self):
        handler = protocol_handler(lambda t: "joy", lambda t: "not_depressed", fail_first=2)
        annotator = mock_annotator(handler, retries=3)
        assert annotator.emotions(["x"]) == [("joy", 0.9)]

    def test_failure_names_post_id(self):
        handler = protocol_handler(lambda t: "joy", lambda t: "not_depressed", fail_first=99)
        annotator = mock_annotator(handler, retries=2)
        post = RawPost(id="failing-post", created_utc=0, title="", body="Hello.")
        with pytest.raises(AnnotationBackendError) as excinfo:
            annotate_corpus([segmented(post)], annotator)
        assert "failing-post" in str(excinfo.value)

    def test_unknown_label_from_backend_rejected(self):
        def handler(request):
            if request.url.path == "/v1/emotions":
                return httpx.Response(200, json={"results": [{"label": "bliss", "score": 0.5}]})
            return httpx.Response(200, json={"label": "not_depressed", "score": 0.5})

        post = RawPost(id="p", created_utc=0, title="", body="Hello.")
        with pytest.raises(AnnotationBackendError):
            annotate_corpus([segmented(post)], mock_annotator(handler))
