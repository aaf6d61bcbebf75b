"""Corpus ingestion: JSON-lines post dumps, normalization, sentence splitting.

Input is one JSON object per line with required keys ``id`` (string) and
``created_utc`` (integer seconds), optional ``title``, ``selftext`` or
``body``, and ``subreddit``. Dump formats vary, so missing optional fields
default to empty text instead of rejecting the record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import MalformedCorpusError


@dataclass(frozen=True)
class RawPost:
    id: str
    created_utc: int
    title: str
    body: str
    source: str = ""


@dataclass(frozen=True)
class Sentence:
    post_id: str
    index: int
    text: str


@dataclass
class CorpusManifest:
    post_count: int
    sentence_count: int
    time_min: int
    time_max: int
    skipped_records: int


_TERMINATORS = frozenset(".!?")


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _coerce_epoch(value) -> int | None:
    """Accept int, integral float, or digit string; reject the rest."""
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str) and value.strip().isdigit():
        return int(value.strip())
    return None


def _coerce_text(value) -> str | None:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return None


def _parse_record(obj) -> RawPost | None:
    if not isinstance(obj, dict):
        return None
    post_id = obj.get("id")
    if not isinstance(post_id, str) or not post_id:
        return None
    created = _coerce_epoch(obj.get("created_utc"))
    if created is None or created < 0:
        return None
    title = _coerce_text(obj.get("title"))
    body = _coerce_text(obj.get("selftext", obj.get("body")))
    if title is None or body is None:
        return None
    source = obj.get("subreddit")
    if source is None:
        source = ""
    elif not isinstance(source, str):
        return None
    return RawPost(id=post_id, created_utc=created, title=title, body=body, source=source)


def load_corpus(
    path,
    time_range: tuple[int, int] | None = None,
    *,
    include_titles: bool = True,
) -> tuple[list[RawPost], CorpusManifest]:
    """Load a JSON-lines dump into RawPosts plus a manifest.

    Malformed lines (bad JSON, missing/invalid required keys, duplicate
    ids, empty title and body) are skipped and tallied in
    ``skipped_records``. Well-formed posts outside ``time_range``
    (inclusive both ends) are dropped silently. The returned posts are
    sorted by (created_utc, id) so results do not depend on file order.

    Raises MalformedCorpusError when the file has lines but every one of
    them was skipped.
    """
    posts: list[RawPost] = []
    seen_ids: set[str] = set()
    skipped = 0
    filtered = 0
    total_lines = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            total_lines += 1
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                skipped += 1
                continue
            post = _parse_record(obj)
            if post is None or post.id in seen_ids:
                skipped += 1
                continue
            if not post.title.strip() and not post.body.strip():
                skipped += 1
                continue
            seen_ids.add(post.id)
            if time_range is not None and not (time_range[0] <= post.created_utc <= time_range[1]):
                filtered += 1
                continue
            posts.append(post)
    if total_lines > 0 and skipped == total_lines:
        raise MalformedCorpusError(f"{path}: {total_lines} lines, none usable")
    posts.sort(key=lambda p: (p.created_utc, p.id))
    sentence_count = sum(len(segment_sentences(p, include_title=include_titles)) for p in posts)
    manifest = CorpusManifest(
        post_count=len(posts),
        sentence_count=sentence_count,
        time_min=min((p.created_utc for p in posts), default=0),
        time_max=max((p.created_utc for p in posts), default=0),
        skipped_records=skipped,
    )
    return posts, manifest


def _split_body(body: str) -> list[str]:
    """Split at '.', '!' or '?' followed by whitespace or end of text.

    Terminators stay with their sentence. No abbreviation handling: the
    splitter is deliberately rule-based so segmentation is deterministic.
    """
    fragments = []
    start = 0
    n = len(body)
    for i, ch in enumerate(body):
        if ch in _TERMINATORS and (i + 1 == n or body[i + 1].isspace()):
            fragments.append(body[start : i + 1])
            start = i + 1
    if start < n:
        fragments.append(body[start:])
    return fragments


def segment_sentences(post: RawPost, *, include_title: bool = True) -> list[Sentence]:
    """Segment a post into sentences.

    The title (when nonempty) becomes sentence 0 as a whole unit; the body
    is split on terminator-plus-whitespace boundaries. Whitespace runs are
    collapsed and empty fragments dropped, so joining the sentence texts
    with single spaces preserves every non-whitespace character of
    title + body.
    """
    texts: list[str] = []
    if include_title:
        title = _normalize_ws(post.title)
        if title:
            texts.append(title)
    for fragment in _split_body(post.body):
        fragment = _normalize_ws(fragment)
        if fragment:
            texts.append(fragment)
    return [Sentence(post_id=post.id, index=i, text=t) for i, t in enumerate(texts)]


def parse_iso_bound(value: str, *, end: bool = False) -> int:
    """ISO-8601 date or datetime -> epoch seconds (UTC assumed when naive).

    Date-only bounds are inclusive: a ``--since`` date means start of day,
    an ``--until`` date means 23:59:59 of that day.
    """
    dt = datetime.fromisoformat(value)
    date_only = len(value) == 10
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    epoch = int(dt.timestamp())
    if end and date_only:
        epoch += 24 * 3600 - 1
    return epoch


def save_posts(posts: list[RawPost], path) -> None:
    """Write posts back out in the canonical JSON-lines dump format."""
    with open(path, "w", encoding="utf-8") as fh:
        for post in posts:
            record = {
                "id": post.id,
                "created_utc": post.created_utc,
                "title": post.title,
                "selftext": post.body,
                "subreddit": post.source,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
