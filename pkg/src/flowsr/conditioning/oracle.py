"""Deterministic record source for synthetic utterances.

Ground-truth labels map straight to record fields, standing in for an
audio-language model: pitch decides gender, vibrato decides emotion, and
the applied degradation decides the noise and quality descriptors. A
corruption mode substitutes content tokens with a given probability to
simulate imperfect transcription.
"""

from __future__ import annotations

import math

import numpy as np

from ..dsp.degrade import DegradationSpec
from ..dsp.synth import UtteranceLabels
from .records import CoTRecord

GENDER_F0_SPLIT_HZ = 165.0

EMOTIONS = ("calm", "animated", "anxious")
NOISE_LABELS = ("none", "hiss", "crowd bursts", "mains hum")
QUALITY_LABELS = (
    "low bandwidth",
    "band limited",
    "wide band",
    "muffled",
    "noisy background",
    "slightly noisy",
    "clean",
)

_NOISE_BY_KIND = {"pink": "hiss", "bursts": "crowd bursts", "hum": "mains hum"}


def emotion_for(vibrato_depth: float, vibrato_rate_hz: float) -> str:
    if vibrato_depth < 0.008:
        return "calm"
    return "anxious" if vibrato_rate_hz >= 5.5 else "animated"


def describe_degradation(spec: DegradationSpec | None, nyquist_hz: float) -> tuple[str, list[str]]:
    """(noise label, quality descriptors) for a degradation, or a clean signal."""
    if spec is None:
        return "none", ["wide band", "clean"]
    ratio = spec.cutoff_hz / nyquist_hz
    if ratio <= 0.26:
        quality = ["low bandwidth", "muffled"]
    elif ratio <= 0.51:
        quality = ["band limited"]
    else:
        quality = ["wide band"]
    bypassed = math.isinf(spec.snr_db) and spec.snr_db > 0
    if bypassed:
        noise = "none"
        quality.append("clean")
    else:
        noise = _NOISE_BY_KIND.get(spec.noise_kind, "hiss")
        quality.append("noisy background" if spec.snr_db < 12.0 else "slightly noisy")
    return noise, quality


def record_for_utterance(
    labels: UtteranceLabels,
    degradation: DegradationSpec | None,
    nyquist_hz: float,
    corruption_p: float = 0.0,
    vocab: list[str] | None = None,
    rng: np.random.Generator | None = None,
) -> CoTRecord:
    gender = "male" if labels.f0_hz < GENDER_F0_SPLIT_HZ else "female"
    emotion = emotion_for(labels.vibrato_depth, labels.vibrato_rate_hz)
    noise, quality = describe_degradation(degradation, nyquist_hz)

    content = list(labels.tokens)
    if corruption_p > 0.0:
        if vocab is None or rng is None:
            raise ValueError("corruption mode needs a vocab and an rng")
        for i, token in enumerate(content):
            if rng.random() < corruption_p:
                others = [t for t in vocab if t != token]
                content[i] = others[rng.integers(len(others))]

    return CoTRecord(gender=gender, emotion=emotion, noise=noise, content=content, quality=quality)
