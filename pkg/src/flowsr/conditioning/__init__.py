"""Semantic records, their cache, and the conditioning embedding stack."""

from .cache import ConditioningCache
from .embed import (
    MARKERS,
    NULL,
    UNK,
    ConditioningBundle,
    SemanticEmbedding,
    Vocabulary,
    assemble_conditioning,
    embed_pitch_stats,
    embed_semantic,
    fourier_embed_bandwidth,
    record_token_ids,
    sinusoidal_positions,
)
from .oracle import (
    EMOTIONS,
    NOISE_LABELS,
    QUALITY_LABELS,
    describe_degradation,
    emotion_for,
    record_for_utterance,
)
from .records import (
    EMPTY_CONTENT_MARKER,
    GENDERS,
    REQUIRED_KEYS,
    CoTParseError,
    CoTRecord,
    CoTSyntaxError,
    parse_cot,
    serialize_cot,
)

__all__ = [
    "ConditioningBundle",
    "ConditioningCache",
    "CoTParseError",
    "CoTRecord",
    "CoTSyntaxError",
    "EMOTIONS",
    "EMPTY_CONTENT_MARKER",
    "GENDERS",
    "MARKERS",
    "NOISE_LABELS",
    "NULL",
    "QUALITY_LABELS",
    "REQUIRED_KEYS",
    "SemanticEmbedding",
    "UNK",
    "Vocabulary",
    "assemble_conditioning",
    "describe_degradation",
    "embed_pitch_stats",
    "embed_semantic",
    "emotion_for",
    "fourier_embed_bandwidth",
    "parse_cot",
    "record_for_utterance",
    "record_token_ids",
    "serialize_cot",
    "sinusoidal_positions",
]
