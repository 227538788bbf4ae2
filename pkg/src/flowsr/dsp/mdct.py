"""MDCT codec with sine window and 50% overlap.

With the sine window the analysis/synthesis pair satisfies the
time-domain alias cancellation condition, so decode(encode(x)) is exact
up to rounding. Frames are ``frame_len`` coefficients wide, windows span
``2 * frame_len`` samples, and the hop equals ``frame_len``. One frame of
zeros is padded on each side so every input sample is covered by two
windows.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .waveform import Waveform, clip_peak


@dataclass
class LatentSequence:
    """frames x dim matrix of MDCT coefficients for one utterance."""

    values: np.ndarray  # (frames, dim)
    sample_rate: int
    n_samples: int  # original sample count, pre-padding
    stats_id: str = "raw"

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass
class LatentStats:
    """Per-dimension z-score statistics for a training corpus."""

    mean: np.ndarray
    std: np.ndarray
    stats_id: str

    @classmethod
    def from_latents(cls, latents) -> "LatentStats":
        stacked = np.concatenate([l.values for l in latents], axis=0)
        mean = stacked.mean(axis=0)
        std = np.maximum(stacked.std(axis=0), 1e-6)
        digest = hashlib.sha256(mean.tobytes() + std.tobytes()).hexdigest()[:16]
        return cls(mean=mean, std=std, stats_id=digest)


def _cosine_basis(m: int) -> np.ndarray:
    """(2m, m) matrix C[n, k] = cos(pi/m * (n + 0.5 + m/2) * (k + 0.5))."""
    n = np.arange(2 * m, dtype=np.float64)[:, None]
    k = np.arange(m, dtype=np.float64)[None, :]
    return np.cos(np.pi / m * (n + 0.5 + m / 2.0) * (k + 0.5))


def sine_window(m: int) -> np.ndarray:
    n = np.arange(2 * m, dtype=np.float64)
    return np.sin(np.pi / (2 * m) * (n + 0.5))


def _frame(signal: np.ndarray, m: int) -> np.ndarray:
    n_frames = len(signal) // m - 1
    idx = np.arange(2 * m)[None, :] + m * np.arange(n_frames)[:, None]
    return signal[idx]


def mdct_encode(w: Waveform, frame_len: int) -> LatentSequence:
    if frame_len % 2 != 0 or frame_len <= 0:
        raise ValueError(f"frame_len must be a positive even number, got {frame_len}")
    m = frame_len
    n = len(w.samples)
    pad_tail = (-n) % m
    padded = np.concatenate([np.zeros(m), w.samples, np.zeros(pad_tail + m)])
    frames = _frame(padded, m)
    coeffs = (frames * sine_window(m)) @ _cosine_basis(m)
    return LatentSequence(values=coeffs, sample_rate=w.sample_rate, n_samples=n)


def mdct_decode(lat: LatentSequence) -> Waveform:
    if lat.stats_id != "raw":
        raise ValueError("decode expects raw (denormalized) coefficients")
    m = lat.dim
    window = sine_window(m)
    basis = _cosine_basis(m)
    pieces = (lat.values @ basis.T) * (2.0 / m) * window
    total = (lat.frames + 1) * m
    out = np.zeros(total)
    for i in range(lat.frames):
        out[i * m:(i + 2) * m] += pieces[i]
    samples = out[m:m + lat.n_samples]
    samples, _ = clip_peak(samples)
    return Waveform(samples, lat.sample_rate)


def normalize(lat: LatentSequence, stats: LatentStats) -> LatentSequence:
    if lat.stats_id != "raw":
        raise ValueError(f"latent already normalized with stats {lat.stats_id}")
    values = (lat.values - stats.mean) / stats.std
    return replace(lat, values=values, stats_id=stats.stats_id)


def denormalize(lat: LatentSequence, stats: LatentStats) -> LatentSequence:
    if lat.stats_id != stats.stats_id:
        raise ValueError(f"latent stats {lat.stats_id} do not match {stats.stats_id}")
    values = lat.values * stats.std + stats.mean
    return replace(lat, values=values, stats_id="raw")
