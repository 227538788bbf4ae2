"""Bandwidth degradation: linear-phase low-pass then additive noise at SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .synth import make_noise
from .waveform import SilentSignalError, Waveform, clip_peak

SNR_BYPASS = math.inf  # sentinel: skip the noise stage entirely

_ATTEN_DB = 70.0
_TRANSITION_HZ = 250.0


@dataclass
class DegradationSpec:
    cutoff_hz: float
    snr_db: float  # SNR_BYPASS disables the noise stage
    noise_kind: str = "pink"
    rng_seed: int = 0

    def validate(self, sample_rate: int) -> "DegradationSpec":
        if not 0 < self.cutoff_hz <= sample_rate / 2:
            raise ValueError(f"cutoff {self.cutoff_hz} Hz outside (0, {sample_rate / 2}]")
        return self


@dataclass
class DegradeResult:
    waveform: Waveform
    applied: DegradationSpec
    clipped_samples: int


def design_lowpass_taps(cutoff_hz: float, sample_rate: int) -> np.ndarray:
    """Kaiser windowed-sinc, ~70 dB stopband, passband edge at ``cutoff_hz``.

    The transition band sits entirely above the cutoff (at most 250 Hz wide)
    so a signal low-passed at c keeps full amplitude up to c and is deep in
    the stopband one bandwidth-grid step later.
    """
    nyquist = sample_rate / 2.0
    transition = min(_TRANSITION_HZ, max(nyquist - cutoff_hz, 1e-9))
    fc = cutoff_hz + transition / 2.0
    beta = 0.1102 * (_ATTEN_DB - 8.7)
    ntaps = int(np.ceil((_ATTEN_DB - 7.95) / (2.285 * 2 * np.pi * transition / sample_rate)))
    ntaps += 1 - ntaps % 2  # odd length, exact linear phase
    mid = ntaps // 2
    m = np.arange(ntaps) - mid
    taps = 2 * fc / sample_rate * np.sinc(2 * fc / sample_rate * m)
    taps *= np.kaiser(ntaps, beta)
    return taps / taps.sum()


def lowpass(w: Waveform, cutoff_hz: float) -> Waveform:
    if not 0 < cutoff_hz < w.nyquist:
        raise ValueError(f"cutoff {cutoff_hz} Hz outside (0, {w.nyquist})")
    taps = design_lowpass_taps(cutoff_hz, w.sample_rate)
    delay = len(taps) // 2
    full = np.convolve(w.samples, taps, mode="full")
    return Waveform(full[delay:delay + len(w.samples)], w.sample_rate)


def snr_scale(signal_power: float, noise_power: float, snr_db: float) -> float:
    """Gain applied to the noise so signal/noise power hits ``snr_db``."""
    if signal_power <= 0:
        raise SilentSignalError("cannot set an SNR against a silent signal")
    if noise_power <= 0:
        raise SilentSignalError("noise reference has zero power")
    return math.sqrt(signal_power / (noise_power * 10.0 ** (snr_db / 10.0)))


def _fit_length(noise: np.ndarray, n: int) -> np.ndarray:
    # Shorter noise is tiled, longer noise is cropped from the start.
    if len(noise) < n:
        reps = -(-n // len(noise))
        noise = np.tile(noise, reps)
    return noise[:n]


def add_noise_at_snr(w: Waveform, noise: Waveform, snr_db: float) -> Waveform:
    if math.isinf(snr_db) and snr_db > 0:
        return Waveform(w.samples.copy(), w.sample_rate)
    if w.sample_rate != noise.sample_rate:
        raise ValueError(f"sample rates differ: {w.sample_rate} vs {noise.sample_rate}")
    fitted = _fit_length(noise.samples, len(w.samples))
    scale = snr_scale(w.power(), float(np.mean(fitted ** 2)), snr_db)
    return Waveform(w.samples + scale * fitted, w.sample_rate)


def degrade(w: Waveform, spec: DegradationSpec) -> DegradeResult:
    """Low-pass first, then noise (matching the training-time augmentation order)."""
    spec.validate(w.sample_rate)
    out = lowpass(w, min(spec.cutoff_hz, w.nyquist - 1e-6))
    if not (math.isinf(spec.snr_db) and spec.snr_db > 0):
        noise = make_noise(spec.noise_kind, len(w.samples), w.sample_rate, spec.rng_seed)
        out = add_noise_at_snr(out, noise, spec.snr_db)
    samples, clipped = clip_peak(out.samples)
    return DegradeResult(Waveform(samples, w.sample_rate), spec, clipped)
