"""Batch HTTP API wrapping sentence-emotion and depression classifiers."""

from .app import BATCH_LIMIT, create_app
from .backends import StubBackend, TransformerBackend
from .labels import DEPRESSION_LABELS, EMOTION_LABELS

__version__ = "0.1.0"

__all__ = [
    "BATCH_LIMIT",
    "DEPRESSION_LABELS",
    "EMOTION_LABELS",
    "StubBackend",
    "TransformerBackend",
    "create_app",
]
