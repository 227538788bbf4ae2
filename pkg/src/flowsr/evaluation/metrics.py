"""Objective metrics: log-spectral distance, word error rate, speaker
similarity via a hand-crafted proxy embedding."""

from __future__ import annotations

import logging

import numpy as np

from ..dsp.pitch import pitch_stats, track_pitch
from ..dsp.spectral import Spectrogram, stft_magnitude
from ..dsp.waveform import Waveform

log = logging.getLogger(__name__)

MAGNITUDE_FLOOR = 1e-8
FRAME_SLACK = 2  # spectrograms may differ by this many frames


def _align(ref: Spectrogram, gen: Spectrogram) -> tuple[np.ndarray, np.ndarray]:
    if ref.n_bins != gen.n_bins:
        raise ValueError(f"bin counts differ: {ref.n_bins} vs {gen.n_bins}")
    if abs(ref.n_frames - gen.n_frames) > FRAME_SLACK:
        raise ValueError(f"frame counts differ beyond slack: {ref.n_frames} vs {gen.n_frames}")
    t = min(ref.n_frames, gen.n_frames)
    if ref.n_frames != gen.n_frames:
        log.warning("truncating spectrograms to common %d frames", t)
    return ref.magnitudes[:t], gen.magnitudes[:t]


def lsd(ref: Spectrogram, gen: Spectrogram, lo_hz: float | None = None) -> float:
    """Frame-averaged RMS of the log power ratio.

    ``lo_hz`` restricts the frequency range (high-band variant); the full
    band is used when omitted. Magnitudes are floored before the log.
    """
    s_ref, s_gen = _align(ref, gen)
    if lo_hz is not None:
        mask = ref.bin_freqs >= lo_hz
        if not mask.any():
            raise ValueError(f"no bins at or above {lo_hz} Hz")
        s_ref, s_gen = s_ref[:, mask], s_gen[:, mask]
    s_ref = np.maximum(s_ref, MAGNITUDE_FLOOR)
    s_gen = np.maximum(s_gen, MAGNITUDE_FLOOR)
    ratio = np.log10(s_ref ** 2 / s_gen ** 2)
    return float(np.mean(np.sqrt(np.mean(ratio ** 2, axis=1))))


def wer(ref_words: list, hyp_words: list) -> float:
    """(substitutions + deletions + insertions) / |ref| by Levenshtein DP."""
    if not ref_words:
        raise ValueError("reference word sequence must be non-empty")
    n, m = len(ref_words), len(hyp_words)
    prev = np.arange(m + 1)
    for i in range(1, n + 1):
        cur = np.empty(m + 1, dtype=np.int64)
        cur[0] = i
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ref_words[i - 1] != hyp_words[j - 1])
            cur[j] = min(sub, prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return float(prev[m]) / n


N_ENVELOPE_BANDS = 16
ENVELOPE_TOP_HZ = 4000.0  # formant/timbre range; above this sits content, not identity
MIN_EMBED_SECONDS = 0.5


def proxy_speaker_embedding(w: Waveform, stats: tuple | None = None) -> np.ndarray:
    """Timbre/prosody fingerprint: pitch summary + 16-band log envelope
    over the formant range (0-4 kHz).

    ``stats`` is an optional (mean, std) pair from a reference corpus; when
    given, the embedding is z-scored by it.
    """
    if w.duration_s < MIN_EMBED_SECONDS:
        raise ValueError(f"need >= {MIN_EMBED_SECONDS} s of audio, got {w.duration_s:.3f}")
    ps = pitch_stats(track_pitch(w))
    spec = stft_magnitude(w, fft_len=512, hop=256)
    power = (spec.magnitudes ** 2).mean(axis=0)
    edges = np.linspace(0.0, min(ENVELOPE_TOP_HZ, w.nyquist), N_ENVELOPE_BANDS + 1)
    freqs = spec.bin_freqs
    bands = np.array(
        [np.log10(power[(freqs >= lo) & (freqs < hi)].mean() + 1e-12) for lo, hi in zip(edges, edges[1:])]
    )
    vec = np.concatenate([ps.as_vector(), bands])
    if stats is not None:
        mean, std = stats
        vec = (vec - mean) / std
    return vec


def speaker_embedding_stats(vectors: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean/std over a reference corpus (std floored)."""
    stacked = np.stack(vectors)
    return stacked.mean(axis=0), np.maximum(stacked.std(axis=0), 1e-6)


def speaker_sim(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ValueError(f"embedding dims differ: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity of a zero vector is undefined")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))
