"""Magnitude spectrograms, mean spectra, and effective-bandwidth estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import SilentSignalError, Waveform

BANDWIDTH_GRID_HZ = 250.0
BANDWIDTH_DROP_DB = 40.0


@dataclass
class Spectrogram:
    """T x F magnitude matrix with its analysis parameters."""

    magnitudes: np.ndarray
    fft_len: int
    hop: int
    sample_rate: int

    @property
    def n_frames(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def n_bins(self) -> int:
        return self.magnitudes.shape[1]

    @property
    def bin_freqs(self) -> np.ndarray:
        return np.fft.rfftfreq(self.fft_len, 1.0 / self.sample_rate)


def _frames(x: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    n = 1 + (len(x) - frame_len) // hop
    idx = np.arange(frame_len)[None, :] + hop * np.arange(n)[:, None]
    return x[idx]


def stft_magnitude(w: Waveform, fft_len: int = 512, hop: int = 128, window: str = "hann") -> Spectrogram:
    if fft_len & (fft_len - 1) or fft_len <= 0:
        raise ValueError(f"fft_len must be a power of two, got {fft_len}")
    if hop > fft_len or hop <= 0:
        raise ValueError(f"hop must be in (0, fft_len], got {hop}")
    if len(w.samples) < fft_len:
        raise ValueError(f"signal of {len(w.samples)} samples is shorter than one frame ({fft_len})")
    if window == "hann":
        win = np.hanning(fft_len)
    elif window == "rect":
        win = np.ones(fft_len)
    else:
        raise ValueError(f"unknown window {window!r}")
    frames = _frames(w.samples, fft_len, hop) * win
    mags = np.abs(np.fft.rfft(frames, axis=1))
    return Spectrogram(mags, fft_len, hop, w.sample_rate)


def mean_power_spectrum(w: Waveform, fft_len: int = 512, hop: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Welch-style per-bin mean power; returns (freqs, power)."""
    spec = stft_magnitude(w, fft_len=fft_len, hop=hop)
    return spec.bin_freqs, (spec.magnitudes ** 2).mean(axis=0)


def band_power(w: Waveform, lo_hz: float, hi_hz: float, fft_len: int = 512, hop: int = 256) -> float:
    """Mean per-bin power inside [lo, hi)."""
    freqs, power = mean_power_spectrum(w, fft_len, hop)
    mask = (freqs >= lo_hz) & (freqs < hi_hz)
    if not mask.any():
        raise ValueError(f"band [{lo_hz}, {hi_hz}) contains no bins")
    return float(power[mask].mean())


def estimate_bandwidth(
    w: Waveform,
    grid_step_hz: float = BANDWIDTH_GRID_HZ,
    drop_db: float = BANDWIDTH_DROP_DB,
) -> float:
    """Effective bandwidth on a fixed grid.

    Returns the lowest grid frequency above which the per-bin mean power
    sits at least ``drop_db`` below the passband's; the top grid point is
    returned when no such edge exists (full-band signals).
    """
    if len(w.samples) < 512:
        raise ValueError("signal shorter than one analysis frame")
    if w.power() <= 0:
        raise SilentSignalError("cannot estimate bandwidth of silence")
    freqs, power = mean_power_spectrum(w)
    grid = np.arange(grid_step_hz, w.nyquist + grid_step_hz / 2, grid_step_hz)
    ratio = 10.0 ** (-drop_db / 10.0)
    for g in grid[:-1]:
        above = power[freqs >= g]
        below = power[freqs < g]
        if below.size and above.size and above.mean() <= below.mean() * ratio:
            return float(g)
    return float(grid[-1])
