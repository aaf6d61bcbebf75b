"""Closed label sets served by the API.

The emotion set is the 28-category GoEmotions taxonomy; the depression
set is the three-level severity scale. Classifier-specific label spellings
are normalized here so the wire format stays stable across model versions.
"""

EMOTION_LABELS = (
    "admiration",
    "amusement",
    "anger",
    "annoyance",
    "approval",
    "caring",
    "confusion",
    "curiosity",
    "desire",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "excitement",
    "fear",
    "gratitude",
    "grief",
    "joy",
    "love",
    "nervousness",
    "optimism",
    "pride",
    "realization",
    "relief",
    "remorse",
    "sadness",
    "surprise",
    "neutral",
)

DEPRESSION_LABELS = ("not_depressed", "moderate", "severe")

# raw classifier outputs -> wire labels
DEPRESSION_ALIASES = {
    "not depression": "not_depressed",
    "not_depression": "not_depressed",
    "notdepression": "not_depressed",
    "moderate": "moderate",
    "severe": "severe",
}


def normalize_depression(raw: str) -> str:
    label = DEPRESSION_ALIASES.get(raw.strip().lower())
    if label is None:
        raise ValueError(f"classifier produced unknown depression label {raw!r}")
    return label
