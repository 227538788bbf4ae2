"""Checkpoint round trips and training resumption."""

import numpy as np

from conftest import sample_pitch, sample_record, tiny_state
from flowsr.model import dit_forward, load_checkpoint, save_checkpoint, train_step
from flowsr.model.flow import TrainItem


def items_for(state, n=2, seed=0):
    rng = np.random.default_rng(seed)
    shape = (10, state.config.latent_dim)
    return [
        TrainItem(
            x1=rng.standard_normal(shape),
            lr_latent=rng.standard_normal(shape),
            record=sample_record(),
            cutoff_hz=2000.0,
            pitch=sample_pitch(),
            item_id=f"u{i}",
        )
        for i in range(n)
    ]


def test_checkpoint_round_trip_forward_bitwise(tmp_path):
    state = tiny_state()
    for _ in range(3):
        state, _ = train_step(state, items_for(state))

    rng = np.random.default_rng(1)
    xt = rng.standard_normal((8, state.config.latent_dim))
    lr = rng.standard_normal((8, state.config.latent_dim))
    bundle = state.build_bundle(sample_record(), 2000.0, sample_pitch())
    before = dit_forward(state, xt, 0.25, lr, bundle).data

    path = tmp_path / "model.ckpt"
    save_checkpoint(path, state)
    loaded = load_checkpoint(path)
    bundle2 = loaded.build_bundle(sample_record(), 2000.0, sample_pitch())
    after = dit_forward(loaded, xt, 0.25, lr, bundle2).data
    assert before.tobytes() == after.tobytes()


def test_reload_resumes_with_identical_next_step_loss(tmp_path):
    state = tiny_state()
    for _ in range(2):
        state, _ = train_step(state, items_for(state))
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, state)

    state_a, loss_a = train_step(state, items_for(state))
    reloaded = load_checkpoint(path)
    state_b, loss_b = train_step(reloaded, items_for(reloaded))
    assert loss_a == loss_b


def test_sidecar_carries_config_and_flags(tmp_path):
    import json

    from flowsr.model import AblationFlags

    state = tiny_state(ablation=AblationFlags(transcript_only=True))
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, state)
    sidecar = json.loads((tmp_path / "model.ckpt.json").read_text())
    assert sidecar["ablation"]["transcript_only"] is True
    assert sidecar["config"]["model_dim"] == state.config.model_dim
    assert sidecar["latent_stats_id"] == state.latent_stats.stats_id

    loaded = load_checkpoint(path)
    assert loaded.ablation.transcript_only
    assert loaded.vocab.tokens == state.vocab.tokens
    assert loaded.opt.step == state.opt.step


def test_save_is_deterministic(tmp_path):
    state = tiny_state()
    p1, p2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    save_checkpoint(p1, state)
    save_checkpoint(p2, state)
    assert p1.read_bytes() == p2.read_bytes()
    assert (tmp_path / "a.ckpt.json").read_text() == (tmp_path / "b.ckpt.json").read_text()
