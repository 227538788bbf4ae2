"""Metric suite and corpus-level evaluation reports."""

from .content import build_template_bank, classify_slots, content_error_rate, slot_band_features
from .metrics import (
    lsd,
    proxy_speaker_embedding,
    speaker_embedding_stats,
    speaker_sim,
    wer,
)
from .report import (
    MEAN_KEYS,
    REPORT_SCHEMA,
    ConditionReport,
    EvalCondition,
    MetricsReport,
    evaluate_corpus,
    record_for_condition,
    render_table,
)

__all__ = [
    "ConditionReport",
    "EvalCondition",
    "MEAN_KEYS",
    "MetricsReport",
    "REPORT_SCHEMA",
    "build_template_bank",
    "classify_slots",
    "content_error_rate",
    "evaluate_corpus",
    "lsd",
    "proxy_speaker_embedding",
    "record_for_condition",
    "render_table",
    "slot_band_features",
    "speaker_embedding_stats",
    "speaker_sim",
    "wer",
]
