"""Autocorrelation pitch tracking and distributional F0 summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import Waveform

SEARCH_FMIN_HZ = 60.0
SEARCH_FMAX_HZ = 500.0
VOICING_THRESHOLD = 0.5
FRAME_LEN = 1024
FRAME_HOP = 256


@dataclass
class PitchTrack:
    f0_hz: np.ndarray  # 0.0 on unvoiced frames
    voiced: np.ndarray  # bool per frame
    hop_s: float

    def __len__(self) -> int:
        return len(self.f0_hz)


@dataclass
class PitchStats:
    median_f0_hz: float
    log_f0_std: float
    voiced_fraction: float

    def as_vector(self) -> np.ndarray:
        return np.array([self.median_f0_hz, self.log_f0_std, self.voiced_fraction])


def _autocorr(frame: np.ndarray, max_lag: int) -> np.ndarray:
    n = len(frame)
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.fft.rfft(frame, nfft)
    r = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1]
    return r


def track_pitch(
    w: Waveform,
    frame_len: int = FRAME_LEN,
    hop: int = FRAME_HOP,
    fmin_hz: float = SEARCH_FMIN_HZ,
    fmax_hz: float = SEARCH_FMAX_HZ,
    voicing_threshold: float = VOICING_THRESHOLD,
) -> PitchTrack:
    """Per-frame peak search over the normalized (biased) autocorrelation.

    The biased estimator shrinks with lag, so on a periodic signal the
    fundamental's lag wins over its multiples (no octave-down drift); exact
    ties break toward the larger lag, i.e. the lower frequency.
    """
    if w.sample_rate < 8000:
        raise ValueError(f"pitch tracking needs >= 8 kHz sample rate, got {w.sample_rate}")
    sr = w.sample_rate
    lag_lo = max(2, int(np.ceil(sr / fmax_hz)))
    lag_hi = min(int(np.floor(sr / fmin_hz)), frame_len - 2)

    x = w.samples
    if len(x) < frame_len or lag_lo >= lag_hi:
        return PitchTrack(np.zeros(0), np.zeros(0, dtype=bool), hop / sr)

    n_frames = 1 + (len(x) - frame_len) // hop
    f0 = np.zeros(n_frames)
    voiced = np.zeros(n_frames, dtype=bool)
    for i in range(n_frames):
        frame = x[i * hop:i * hop + frame_len]
        frame = frame - frame.mean()
        r = _autocorr(frame, lag_hi + 1)
        if r[0] <= 1e-12:
            continue
        nr = r / r[0]
        window = nr[lag_lo:lag_hi + 1]
        peak = window.max()
        if peak < voicing_threshold:
            continue
        lag = lag_lo + int(np.flatnonzero(window == peak)[-1])
        # Three-point parabolic refinement around the peak.
        if lag_lo < lag < lag_hi:
            a, b, c = nr[lag - 1], nr[lag], nr[lag + 1]
            denom = a - 2 * b + c
            if abs(denom) > 1e-12:
                shift = 0.5 * (a - c) / denom
                if abs(shift) < 1.0:
                    lag = lag + shift
        voiced[i] = True
        f0[i] = sr / lag
    return PitchTrack(f0, voiced, hop / sr)


def pitch_stats(track: PitchTrack) -> PitchStats:
    """Median F0, log-F0 spread, and voiced fraction; zeros when all unvoiced."""
    if len(track) == 0 or not track.voiced.any():
        return PitchStats(0.0, 0.0, 0.0)
    voiced_f0 = track.f0_hz[track.voiced]
    return PitchStats(
        median_f0_hz=float(np.median(voiced_f0)),
        log_f0_std=float(np.std(np.log(voiced_f0))),
        voiced_fraction=float(track.voiced.mean()),
    )
