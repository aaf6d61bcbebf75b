import json

import pytest
from hypothesis import given, strategies as st

from emopairs.corpus import (
    RawPost,
    load_corpus,
    parse_iso_bound,
    save_posts,
    segment_sentences,
)
from emopairs.errors import MalformedCorpusError


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def record(post_id, created=1_600_000_000, title="t", body="b", **extra):
    obj = {"id": post_id, "created_utc": created, "title": title, "selftext": body}
    obj.update(extra)
    return json.dumps(obj)


class TestLoadCorpus:
    def test_single_record(self, tmp_path):
        path = write_lines(tmp_path / "one.jsonl", [record("p1")])
        posts, manifest = load_corpus(path)
        assert len(posts) == 1
        assert posts[0] == RawPost(id="p1", created_utc=1_600_000_000, title="t", body="b")
        assert manifest.post_count == 1
        assert manifest.skipped_records == 0

    def test_empty_file(self, tmp_path):
        path = write_lines(tmp_path / "empty.jsonl", [])
        posts, manifest = load_corpus(path)
        assert posts == []
        assert manifest.post_count == 0
        assert manifest.skipped_records == 0

    def test_mixed_fixture_with_time_filter(self, tmp_path):
        # 10 lines: 2 malformed, 3 outside the window, 5 kept
        lines = [
            record("a", 100),
            record("b", 200),
            "not json at all",
            record("c", 50),  # below window
            record("d", 300),
            json.dumps({"created_utc": 150}),  # missing id
            record("e", 400),
            record("f", 999),  # above window
            record("g", 998),  # above window
            record("h", 250),
        ]
        path = write_lines(tmp_path / "mixed.jsonl", lines)
        posts, manifest = load_corpus(path, time_range=(100, 500))
        assert len(posts) == 5
        assert manifest.post_count == 5
        assert manifest.skipped_records == 2
        # line accounting: posts + skipped + filtered = lines
        assert manifest.post_count + manifest.skipped_records + 3 == len(lines)

    def test_all_lines_malformed(self, tmp_path):
        path = write_lines(tmp_path / "bad.jsonl", ["oops", "{}", '{"id": 3}'])
        with pytest.raises(MalformedCorpusError):
            load_corpus(path)

    def test_missing_path_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_corpus(tmp_path / "missing.jsonl")

    def test_empty_title_and_body_skipped(self, tmp_path):
        path = write_lines(
            tmp_path / "blank.jsonl",
            [record("p1", title="", body="  "), record("p2", title="x", body="")],
        )
        posts, manifest = load_corpus(path)
        assert [p.id for p in posts] == ["p2"]
        assert manifest.skipped_records == 1

    def test_duplicate_id_skipped(self, tmp_path):
        path = write_lines(tmp_path / "dup.jsonl", [record("p1"), record("p1", 1)])
        posts, manifest = load_corpus(path)
        assert len(posts) == 1
        assert manifest.skipped_records == 1

    def test_sorted_by_time_then_id(self, tmp_path):
        path = write_lines(
            tmp_path / "order.jsonl",
            [record("z", 200), record("b", 100), record("a", 100)],
        )
        posts, _ = load_corpus(path)
        assert [p.id for p in posts] == ["a", "b", "z"]

    def test_body_key_fallback_and_missing_title(self, tmp_path):
        line = json.dumps({"id": "p", "created_utc": 5, "body": "hello", "subreddit": "r"})
        path = write_lines(tmp_path / "alt.jsonl", [line])
        posts, _ = load_corpus(path)
        assert posts[0].title == ""
        assert posts[0].body == "hello"
        assert posts[0].source == "r"

    def test_manifest_time_bounds(self, tmp_path):
        path = write_lines(tmp_path / "t.jsonl", [record("a", 7), record("b", 3)])
        _, manifest = load_corpus(path)
        assert (manifest.time_min, manifest.time_max) == (3, 7)
        assert manifest.time_min <= manifest.time_max

    def test_inclusive_time_bounds(self, tmp_path):
        path = write_lines(tmp_path / "bounds.jsonl", [record("a", 100), record("b", 200)])
        posts, _ = load_corpus(path, time_range=(100, 200))
        assert len(posts) == 2

    def test_roundtrip_save_posts(self, tmp_path):
        path = write_lines(tmp_path / "in.jsonl", [record("a", 9, title="T", body="B")])
        posts, _ = load_corpus(path)
        out = tmp_path / "out.jsonl"
        save_posts(posts, out)
        again, _ = load_corpus(out)
        assert again == posts


class TestSegmentSentences:
    def post(self, title, body):
        return RawPost(id="x", created_utc=0, title=title, body=body)

    def test_two_terminated_clauses(self):
        sentences = segment_sentences(self.post("", "I left. She cried!"))
        assert [s.text for s in sentences] == ["I left.", "She cried!"]
        assert [s.index for s in sentences] == [0, 1]

    def test_title_becomes_sentence_zero(self):
        sentences = segment_sentences(self.post("My story", "Why? Because."))
        assert [s.text for s in sentences] == ["My story", "Why?", "Because."]

    def test_empty_post(self):
        assert segment_sentences(self.post("", "")) == []

    def test_ignore_title(self):
        sentences = segment_sentences(self.post("My story", "Why?"), include_title=False)
        assert [s.text for s in sentences] == ["Why?"]

    def test_terminator_without_whitespace_does_not_split(self):
        sentences = segment_sentences(self.post("", "v1.2 is out. Really?!"))
        assert [s.text for s in sentences] == ["v1.2 is out.", "Really?!"]

    def test_whitespace_collapsed(self):
        sentences = segment_sentences(self.post("", "a   b.\n\nnext  one!"))
        assert [s.text for s in sentences] == ["a b.", "next one!"]

    def test_deterministic(self):
        post = self.post("T", "One. Two! Three?")
        assert segment_sentences(post) == segment_sentences(post)

    @given(
        title=st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40),
        body=st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=200),
    )
    def test_concatenation_preserves_characters(self, title, body):
        post = self.post(title, body)
        joined = " ".join(s.text for s in segment_sentences(post))
        original = "".join((title + body).split())
        assert "".join(joined.split()) == original

    @given(body=st.lists(st.sampled_from(["Hi there.", "No!", "Why?", "plain text"]), max_size=6))
    def test_indices_contiguous(self, body):
        sentences = segment_sentences(self.post("head", " ".join(body)))
        assert [s.index for s in sentences] == list(range(len(sentences)))


class TestIsoBounds:
    def test_date_only_since_is_start_of_day(self):
        assert parse_iso_bound("2012-01-01") == 1325376000

    def test_date_only_until_is_end_of_day(self):
        assert parse_iso_bound("2022-12-31", end=True) == 1672531199

    def test_full_timestamp_passes_through(self):
        assert parse_iso_bound("2012-01-01T00:00:30+00:00") == 1325376030
