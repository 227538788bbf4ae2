"""Waveform container and 16-bit PCM WAV I/O."""

from __future__ import annotations

import wave
from dataclasses import dataclass

import numpy as np


class SilentSignalError(ValueError):
    """Raised when an operation needs signal power and gets silence."""


@dataclass
class Waveform:
    """Mono audio: float samples in [-1, 1] at an integer sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError(f"waveform must be 1-D, got shape {self.samples.shape}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2.0

    def power(self) -> float:
        return float(np.mean(self.samples ** 2)) if len(self.samples) else 0.0

    def assert_finite(self) -> "Waveform":
        if not np.all(np.isfinite(self.samples)):
            raise FloatingPointError("non-finite samples in waveform")
        return self


def clip_peak(samples: np.ndarray) -> tuple[np.ndarray, int]:
    """Clamp to [-1, 1]; returns (clipped samples, number of clipped points)."""
    over = int(np.count_nonzero(np.abs(samples) > 1.0))
    if over:
        samples = np.clip(samples, -1.0, 1.0)
    return samples, over


def write_wav(path, w: Waveform) -> None:
    """PCM 16-bit mono little-endian RIFF."""
    ints = np.round(np.clip(w.samples, -1.0, 1.0) * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(w.sample_rate)
        fh.writeframes(ints.tobytes())


def read_wav(path) -> Waveform:
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1 or fh.getsampwidth() != 2:
            raise ValueError(f"{path}: expected 16-bit mono PCM")
        raw = fh.readframes(fh.getnframes())
        rate = fh.getframerate()
    ints = np.frombuffer(raw, dtype="<i2")
    return Waveform(ints.astype(np.float64) / 32767.0, rate)
