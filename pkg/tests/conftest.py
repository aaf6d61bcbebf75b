import random

import pytest

from emopairs.annotation import AnnotatedPost, DepressionLabel, SentenceEmotion
from emopairs.emotions import EMOTIONS


def make_post(post_id, emotions, outcome=0, depression=None):
    """AnnotatedPost with one sentence per listed emotion, in order."""
    if depression is None:
        depression = DepressionLabel("moderate" if outcome else "not_depressed", 1.0)
    return AnnotatedPost(
        post_id=post_id,
        sentence_emotions=[
            SentenceEmotion(index=i, emotion=e, score=1.0) for i, e in enumerate(emotions)
        ],
        depression=depression,
        outcome=outcome,
    )


def make_corpus(emotion_sets, outcomes=None):
    outcomes = outcomes or [0] * len(emotion_sets)
    return [
        make_post(f"p{i}", emotions, outcome)
        for i, (emotions, outcome) in enumerate(zip(emotion_sets, outcomes))
    ]


def random_corpus(seed, max_posts=200, pool_size=6, *, with_outcomes=False):
    """Small random corpus over a bounded emotion pool (test oracle input)."""
    rng = random.Random(seed)
    pool = rng.sample([e for e in EMOTIONS if e != "neutral"], pool_size)
    posts = []
    for i in range(rng.randint(1, max_posts)):
        k = rng.randint(1, pool_size)
        emotions = rng.sample(pool, k)
        # repeat some sentences so multiset != set
        emotions = emotions + rng.sample(emotions, rng.randint(0, len(emotions)))
        rng.shuffle(emotions)
        outcome = rng.randint(0, 1) if with_outcomes else 0
        posts.append(make_post(f"r{i}", emotions, outcome))
    return posts


@pytest.fixture
def two_post_corpus():
    """The hand-enumerated co-occurrence example."""
    return make_corpus([["anger", "sadness"], ["anger", "sadness", "joy"]])
