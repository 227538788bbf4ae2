"""End-to-end restoration: degraded waveform in, full-band waveform out."""

from __future__ import annotations

import numpy as np

from ..conditioning.records import CoTRecord
from ..dsp.mdct import LatentSequence, denormalize, mdct_encode, normalize
from ..dsp.pitch import pitch_stats, track_pitch
from ..dsp.spectral import estimate_bandwidth
from ..dsp.waveform import Waveform
from ..dsp.mdct import mdct_decode
from .flow import euler_sample
from .state import ModelState


def restore(
    w_lr: Waveform,
    record: CoTRecord,
    state: ModelState,
    steps: int = 32,
    seed: int = 0,
) -> Waveform:
    """Encode, condition, integrate the flow from fresh noise, decode.

    Acoustic priors (bandwidth, pitch) are measured on the degraded input
    itself; the semantic record comes from the caller. Deterministic for a
    fixed seed. Inputs longer than ``max_frames`` frames are processed in
    independent chunks.
    """
    cfg = state.config
    if w_lr.sample_rate != cfg.sample_rate:
        raise ValueError(f"expected {cfg.sample_rate} Hz input, got {w_lr.sample_rate}")

    lr_raw = mdct_encode(w_lr, cfg.latent_dim)
    lr = normalize(lr_raw, state.latent_stats)

    cutoff = estimate_bandwidth(w_lr)
    pitch = pitch_stats(track_pitch(w_lr))
    bundle = state.build_bundle(record, cutoff, pitch)

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0xE5,)))
    dtype = cfg.np_dtype
    outputs = []
    for start in range(0, lr.frames, cfg.max_frames):
        chunk = lr.values[start:start + cfg.max_frames].astype(dtype)
        x0 = rng.standard_normal(chunk.shape).astype(dtype)
        outputs.append(euler_sample(state, x0, chunk, bundle, steps=steps))
    restored_values = np.concatenate(outputs, axis=0).astype(np.float64)

    restored = LatentSequence(
        values=restored_values,
        sample_rate=cfg.sample_rate,
        n_samples=lr_raw.n_samples,
        stats_id=lr.stats_id,
    )
    return mdct_decode(denormalize(restored, state.latent_stats))
