"""Shared builders for small model states used across test modules."""

import numpy as np
import pytest

from flowsr.conditioning import CoTRecord, Vocabulary
from flowsr.dsp import LatentStats, PitchStats
from flowsr.model import AblationFlags, DiTConfig, ModelState
from flowsr.numerics import AdamWState


def tiny_config(**kw):
    base = dict(
        depth=2,
        model_dim=32,
        num_heads=2,
        latent_dim=8,
        max_frames=16,
        cond_width=16,
        mlp_hidden=48,
        time_dim=16,
        fourier_k=4,
        pitch_embed_dim=8,
        sample_rate=16000,
        seed=5,
        dtype="float64",
    )
    base.update(kw)
    return DiTConfig(**base)


def tiny_state(config=None, ablation=None, seed=7, lr=1e-3, weight_decay=0.0):
    config = config or tiny_config()
    vocab = Vocabulary.build([f"S{i}" for i in range(10)])
    stats = LatentStats(np.zeros(config.latent_dim), np.ones(config.latent_dim), "unitstats0000000")
    return ModelState.initialize(
        config,
        vocab,
        stats,
        AdamWState(lr=lr, weight_decay=weight_decay),
        ablation=ablation or AblationFlags(),
        seed=seed,
    )


def sample_record(**kw):
    base = dict(
        gender="male",
        emotion="calm",
        noise="hiss",
        content=["S1", "S2"],
        quality=["low bandwidth", "muffled"],
    )
    base.update(kw)
    return CoTRecord(**base)


def sample_pitch():
    return PitchStats(110.0, 0.01, 0.95)


@pytest.fixture
def record():
    return sample_record()


@pytest.fixture
def pitch():
    return sample_pitch()
