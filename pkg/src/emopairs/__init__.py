"""Emotion co-occurrence analytics for Reddit-style corpora.

Pipeline: ingest posts, label sentences with emotions and posts with a
depression severity, build post-level co-occurrence networks and frequency
distributions, and regress the binarized depression outcome on emotion-pair
features with Wald inference and odds ratios.
"""

from .annotation import (
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
from .cooccurrence import (
    CooccurrenceMatrix,
    EmotionNetwork,
    build_cooccurrence,
    compute_node_stats,
    export_matrix,
    export_network,
    matrix_to_network,
)
from .corpus import CorpusManifest, RawPost, Sentence, load_corpus, segment_sentences
from .diststats import (
    DistributionSummary,
    PairCountHistogram,
    emotion_frequency,
    pair_count_histogram,
    top_k_share,
)
from .emotions import EMOTIONS, canonical_pair, sentiment_of
from .logit import (
    FitConfig,
    FitResult,
    PairEffect,
    fit_logistic,
    significant_pairs,
    std_normal_cdf,
)
from .pairfeat import (
    DesignMatrix,
    PairVocabulary,
    build_design_matrix,
    build_vocabulary,
    extract_pairs,
)
from .simulate import PlantedModel, SplitMix64, default_model, generate_corpus

__version__ = "0.1.0"

__all__ = [
    "AnnotatedPost",
    "CooccurrenceMatrix",
    "CorpusManifest",
    "DepressionLabel",
    "DesignMatrix",
    "DistributionSummary",
    "EMOTIONS",
    "EmotionNetwork",
    "FitConfig",
    "FitResult",
    "LexiconAnnotator",
    "PairCountHistogram",
    "PairEffect",
    "PairVocabulary",
    "PlantedModel",
    "RawPost",
    "RemoteAnnotator",
    "Sentence",
    "SentenceEmotion",
    "SplitMix64",
    "annotate_corpus",
    "binarize_depression",
    "build_cooccurrence",
    "build_design_matrix",
    "build_vocabulary",
    "canonical_pair",
    "compute_node_stats",
    "default_model",
    "emotion_frequency",
    "export_matrix",
    "export_network",
    "extract_pairs",
    "fit_logistic",
    "generate_corpus",
    "lexicon_annotate",
    "load_annotations",
    "load_corpus",
    "matrix_to_network",
    "pair_count_histogram",
    "save_annotations",
    "segment_sentences",
    "sentiment_of",
    "significant_pairs",
    "std_normal_cdf",
    "top_k_share",
]
