"""Synthetic speech-like corpus: harmonic voices plus token-coded high bands.

Each utterance is a harmonic source (fundamental + vibrato) shaped by a
formant envelope, a faint broadband breath-noise floor, and one
"content token" per time slot. A token is rendered as band-limited noise
in a token-specific subset of high-band channels (all above 4 kHz at a
16 kHz rate), which makes content recoverable by band-energy matching
and destroyable by low-pass filtering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .waveform import Waveform, clip_peak

F0_MIN, F0_MAX = 70.0, 400.0
DURATION_MIN, DURATION_MAX = 0.5, 4.0

# High-band channel grid used by token signatures (and by classifiers).
N_CHANNELS = 16
CHANNEL_EDGES = np.linspace(4200.0, 7800.0, N_CHANNELS + 1)
CHANNELS_PER_TOKEN = 3

HARMONIC_RMS = 0.15
BURST_RMS = 0.05
BREATH_RMS = 0.004

NOISE_KINDS = ("pink", "bursts", "hum")


class UtteranceSpecError(ValueError):
    pass


@dataclass
class Formant:
    center_hz: float
    width_hz: float
    gain: float


@dataclass
class SyntheticUtteranceSpec:
    f0_hz: float
    vibrato_depth: float
    vibrato_rate_hz: float
    formants: list[Formant]
    content_tokens: list[str]
    duration_s: float
    rng_seed: int

    def validate(self) -> "SyntheticUtteranceSpec":
        if not F0_MIN <= self.f0_hz <= F0_MAX:
            raise UtteranceSpecError(f"f0 {self.f0_hz} Hz outside [{F0_MIN}, {F0_MAX}]")
        if not DURATION_MIN <= self.duration_s <= DURATION_MAX:
            raise UtteranceSpecError(f"duration {self.duration_s} s outside [{DURATION_MIN}, {DURATION_MAX}]")
        if not self.content_tokens:
            raise UtteranceSpecError("content_tokens must be non-empty")
        if not self.formants:
            raise UtteranceSpecError("at least one formant band required")
        return self


@dataclass
class UtteranceLabels:
    """Ground truth for one synthetic utterance."""

    tokens: list[str]
    slot_boundaries_s: list[tuple[float, float]]
    f0_hz: float
    duration_s: float
    vibrato_depth: float
    vibrato_rate_hz: float
    formants: list[Formant] = field(default_factory=list)


def default_vocab(size: int = 10) -> list[str]:
    return [f"S{i}" for i in range(size)]


def token_index(token: str) -> int:
    if not token.startswith("S") or not token[1:].isdigit():
        raise UtteranceSpecError(f"unknown content token {token!r}")
    return int(token[1:])


def token_signature(index: int) -> np.ndarray:
    """Deterministic per-token channel gains, independent of corpus seed."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=6_021_023, spawn_key=(index,)))
    active = rng.choice(N_CHANNELS, size=CHANNELS_PER_TOKEN, replace=False)
    gains = rng.uniform(0.7, 1.0, size=CHANNELS_PER_TOKEN)
    sig = np.zeros(N_CHANNELS)
    sig[active] = gains
    return sig


def band_limited_noise(rng: np.random.Generator, n: int, sample_rate: int, lo: float, hi: float) -> np.ndarray:
    """Unit-RMS noise confined to [lo, hi) via an FFT mask."""
    spec = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, 1.0 / sample_rate)
    spec[(freqs < lo) | (freqs >= hi)] = 0.0
    x = np.fft.irfft(spec, n)
    rms = np.sqrt(np.mean(x * x))
    return x / rms if rms > 0 else x


def formant_envelope(freqs_hz: np.ndarray, formants: list[Formant]) -> np.ndarray:
    env = np.full_like(freqs_hz, 0.02, dtype=np.float64)
    for f in formants:
        env = env + f.gain * np.exp(-0.5 * ((freqs_hz - f.center_hz) / f.width_hz) ** 2)
    return env


def _slot_gate(n: int, start: int, end: int, ramp: int) -> np.ndarray:
    gate = np.zeros(n)
    gate[start:end] = 1.0
    ramp = min(ramp, (end - start) // 2)
    if ramp > 0:
        up = 0.5 * (1 - np.cos(np.linspace(0, np.pi, ramp)))
        gate[start:start + ramp] = up
        gate[end - ramp:end] = up[::-1]
    return gate


def synth_utterance(spec: SyntheticUtteranceSpec, sample_rate: int) -> tuple[Waveform, UtteranceLabels]:
    spec.validate()
    rng = np.random.default_rng(spec.rng_seed)
    n = int(round(spec.duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    nyquist = sample_rate / 2.0

    inst_f0 = spec.f0_hz * (1.0 + spec.vibrato_depth * np.sin(2 * np.pi * spec.vibrato_rate_hz * t))
    base_phase = 2 * np.pi * np.cumsum(inst_f0) / sample_rate

    peak_f0 = spec.f0_hz * (1.0 + abs(spec.vibrato_depth))
    n_harm = max(1, int(0.95 * nyquist / peak_f0))
    amps = formant_envelope(spec.f0_hz * np.arange(1, n_harm + 1), spec.formants)
    phases = rng.uniform(0, 2 * np.pi, size=n_harm)
    harm = np.zeros(n)
    for k in range(1, n_harm + 1):
        harm += amps[k - 1] * np.sin(k * base_phase + phases[k - 1])
    harm *= HARMONIC_RMS / max(np.sqrt(np.mean(harm * harm)), 1e-12)

    breath = rng.standard_normal(n) * BREATH_RMS

    bursts = np.zeros(n)
    slots: list[tuple[float, float]] = []
    n_tok = len(spec.content_tokens)
    ramp = int(0.010 * sample_rate)
    for i, token in enumerate(spec.content_tokens):
        start = int(round(i * n / n_tok))
        end = int(round((i + 1) * n / n_tok))
        slots.append((start / sample_rate, end / sample_rate))
        sig = token_signature(token_index(token))
        burst = np.zeros(n)
        for ch in np.flatnonzero(sig):
            burst += sig[ch] * band_limited_noise(
                rng, n, sample_rate, CHANNEL_EDGES[ch], CHANNEL_EDGES[ch + 1]
            )
        seg = burst[start:end]
        seg_rms = max(np.sqrt(np.mean(seg * seg)), 1e-12)
        bursts += burst * (BURST_RMS / seg_rms) * _slot_gate(n, start, end, ramp)

    samples, _ = clip_peak(harm + breath + bursts)
    labels = UtteranceLabels(
        tokens=list(spec.content_tokens),
        slot_boundaries_s=slots,
        f0_hz=spec.f0_hz,
        duration_s=spec.duration_s,
        vibrato_depth=spec.vibrato_depth,
        vibrato_rate_hz=spec.vibrato_rate_hz,
        formants=list(spec.formants),
    )
    return Waveform(samples, sample_rate), labels


def make_noise(kind: str, n: int, sample_rate: int, seed: int) -> Waveform:
    """Seeded procedural noise texture, unit RMS."""
    rng = np.random.default_rng(seed)
    if kind == "pink":
        spec = np.fft.rfft(rng.standard_normal(n))
        freqs = np.fft.rfftfreq(n, 1.0 / sample_rate)
        spec[1:] /= np.sqrt(freqs[1:])
        spec[0] = 0.0
        x = np.fft.irfft(spec, n)
    elif kind == "bursts":
        t = np.arange(n) / sample_rate
        rate = rng.uniform(2.0, 6.0)
        phase = rng.uniform(0, 2 * np.pi)
        gate = 0.15 + 0.85 * np.clip(np.sin(2 * np.pi * rate * t + phase), 0.0, 1.0) ** 2
        x = rng.standard_normal(n) * gate
    elif kind == "hum":
        t = np.arange(n) / sample_rate
        phase = rng.uniform(0, 2 * np.pi, size=3)
        x = (
            np.sin(2 * np.pi * 50.0 * t + phase[0])
            + 0.5 * np.sin(2 * np.pi * 100.0 * t + phase[1])
            + 0.25 * np.sin(2 * np.pi * 150.0 * t + phase[2])
            + 0.3 * rng.standard_normal(n)
        )
    else:
        raise ValueError(f"unknown noise kind {kind!r}; expected one of {NOISE_KINDS}")
    rms = np.sqrt(np.mean(x * x))
    return Waveform(x / rms, sample_rate)
