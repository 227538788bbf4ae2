"""Training command: dynamic degradation sampling, validation, checkpoints.

Each step samples a fresh degradation per item (cutoff from the configured
grid, SNR uniform in range, noise kind from the bank), measures the
acoustic priors on the degraded signal, and rebuilds the record's
noise/quality descriptors for the applied degradation; identity and
content fields come from the cached oracle record. Low-passed signals are
cached per (utterance, cutoff) since the grid is small.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..conditioning.cache import ConditioningCache
from ..conditioning.oracle import describe_degradation
from ..conditioning.records import CoTRecord
from ..dsp.degrade import DegradationSpec, add_noise_at_snr, lowpass, make_noise
from ..dsp.manifest import ManifestEntry, read_manifest, resolve_wav
from ..dsp.mdct import LatentSequence, LatentStats, mdct_encode, normalize
from ..dsp.pitch import pitch_stats, track_pitch
from ..dsp.spectral import estimate_bandwidth
from ..dsp.waveform import Waveform, read_wav
from ..model.flow import TrainItem, step_rng, train_step
from ..model.state import ModelState, save_checkpoint
from ..conditioning.embed import Vocabulary
from .config import RunConfig


@dataclass
class _Utterance:
    entry: ManifestEntry
    wave: Waveform
    latent_normed: np.ndarray
    record_base: CoTRecord


class TrainingData:
    """Loaded split with lazy per-cutoff low-pass caching."""

    def __init__(
        self,
        manifest_path,
        cache: ConditioningCache,
        stats: LatentStats | None,
        dtype,
        latent_dim: int = 64,
    ):
        self.entries = read_manifest(manifest_path)
        if not self.entries:
            raise ValueError(f"empty manifest {manifest_path}")
        self.dtype = dtype
        waves = {e.id: read_wav(resolve_wav(manifest_path, e)) for e in self.entries}
        latents = {e.id: mdct_encode(waves[e.id], latent_dim) for e in self.entries}
        if stats is None:
            stats = LatentStats.from_latents(list(latents.values()))
        self.stats = stats
        self.utterances = []
        for e in self.entries:
            base = cache.get(e.id)
            if base is None:
                raise KeyError(f"no cached record for {e.id}")
            self.utterances.append(
                _Utterance(
                    entry=e,
                    wave=waves[e.id],
                    latent_normed=normalize(latents[e.id], stats).values.astype(dtype),
                    record_base=base,
                )
            )
        self._lowpass_cache: dict[tuple[str, float], np.ndarray] = {}

    def __len__(self):
        return len(self.utterances)

    def lowpassed(self, utt: _Utterance, cutoff_hz: float) -> np.ndarray:
        key = (utt.entry.id, cutoff_hz)
        if key not in self._lowpass_cache:
            self._lowpass_cache[key] = lowpass(utt.wave, cutoff_hz).samples
        return self._lowpass_cache[key]

    def latent_dim(self) -> int:
        return self.utterances[0].latent_normed.shape[1]


def degraded_item(
    data: TrainingData,
    utt: _Utterance,
    spec: DegradationSpec,
    sample_rate: int,
    max_frames: int,
) -> TrainItem:
    """Degrade, measure priors, and assemble one training item."""
    filtered = data.lowpassed(utt, spec.cutoff_hz)
    lr_wave = Waveform(filtered, sample_rate)
    if not (math.isinf(spec.snr_db) and spec.snr_db > 0):
        noise = make_noise(spec.noise_kind, len(filtered), sample_rate, spec.rng_seed)
        lr_wave = add_noise_at_snr(lr_wave, noise, spec.snr_db)

    cutoff_est = estimate_bandwidth(lr_wave)
    pitch = pitch_stats(track_pitch(lr_wave))
    noise_label, quality = describe_degradation(spec, sample_rate / 2)
    record = CoTRecord(
        gender=utt.record_base.gender,
        emotion=utt.record_base.emotion,
        noise=noise_label,
        content=list(utt.record_base.content),
        quality=quality,
    )
    lr_latent = normalize(mdct_encode(lr_wave, data.latent_dim()), data.stats).values.astype(data.dtype)
    return TrainItem(
        x1=utt.latent_normed[:max_frames],
        lr_latent=lr_latent[:max_frames],
        record=record,
        cutoff_hz=cutoff_est,
        pitch=pitch,
        item_id=utt.entry.id,
    )


def sample_degradation(cfg_deg: dict, rng: np.random.Generator) -> DegradationSpec:
    grid = cfg_deg["cutoff_grid_hz"]
    return DegradationSpec(
        cutoff_hz=float(grid[int(rng.integers(len(grid)))]),
        snr_db=float(rng.uniform(*cfg_deg["snr_range_db"])),
        noise_kind=cfg_deg["noise_kinds"][int(rng.integers(len(cfg_deg["noise_kinds"])))],
        rng_seed=int(rng.integers(2 ** 31)),
    )


def validation_loss(state: ModelState, data: TrainingData, n_items: int, seed: int) -> float:
    """Mean flow loss over fixed validation items with fixed samples."""
    from ..model.dit import velocity_forward
    from ..model.flow import FlowSample, rf_loss

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(3,)))
    total = 0.0
    items = data.utterances[:n_items]
    for utt in items:
        item = degraded_item(
            data, utt, utt.entry.degradation, state.config.sample_rate, state.config.max_frames
        )
        sample = FlowSample.at(item.x1, rng.standard_normal(item.x1.shape).astype(item.x1.dtype), 0.5)
        bundle = state.build_bundle(item.record, item.cutoff_hz, item.pitch)
        velocity = velocity_forward(state.params, state.config, sample.xt, sample.t, item.lr_latent, bundle)
        total += float(rf_loss(velocity, sample.target_velocity).data)
    return total / max(len(items), 1)


def cmd_train(config: RunConfig, data_dir, out_dir, steps_override: int | None = None) -> dict:
    """Train from scratch; writes best/last checkpoints and a loss log.

    Returns {"best_val": float, "loss_log": path, "last": path, "best": path}.
    """
    data_dir, out = Path(data_dir), Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(data_dir / "meta.json", "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    cache = ConditioningCache(data_dir / "cot_cache.jsonl")
    dit_cfg = config.dit_config()
    dtype = dit_cfg.np_dtype

    train_data = TrainingData(
        data_dir / "train.jsonl", cache, stats=None, dtype=dtype, latent_dim=dit_cfg.latent_dim
    )
    val_data = TrainingData(
        data_dir / "val.jsonl", cache, stats=train_data.stats, dtype=dtype, latent_dim=dit_cfg.latent_dim
    )

    vocab = Vocabulary.build(meta["content_vocab"])
    train_cfg = config["training"]
    state = ModelState.initialize(
        dit_cfg,
        vocab,
        train_data.stats,
        config.adamw(),
        ablation=config.ablation_flags(),
        seed=train_cfg["seed"],
    )

    n_steps = train_cfg["steps"] if steps_override is None else steps_override
    batch_size = train_cfg["batch_size"]
    best_val = math.inf
    audit: list[list[int]] = []
    log_path = out / "loss_log.jsonl"
    with open(log_path, "w", encoding="utf-8") as log:
        log.write(json.dumps({"config_fingerprint": config.fingerprint}) + "\n")
        for step in range(n_steps):
            rng = step_rng(train_cfg["seed"] + 1_000_003, step)
            idx = [int(i) for i in rng.integers(len(train_data), size=batch_size)]
            if step < 16:
                audit.append(idx)
            batch = [
                degraded_item(
                    train_data,
                    train_data.utterances[i],
                    sample_degradation(config["degradation"], rng),
                    dit_cfg.sample_rate,
                    dit_cfg.max_frames,
                )
                for i in idx
            ]
            state, loss = train_step(state, batch)
            log.write(json.dumps({"step": step, "loss": loss}) + "\n")
            if (step + 1) % train_cfg["val_every"] == 0 or step + 1 == n_steps:
                val = validation_loss(state, val_data, train_cfg["val_items"], train_cfg["seed"])
                log.write(json.dumps({"step": step, "val_loss": val}) + "\n")
                if val < best_val:
                    best_val = val
                    save_checkpoint(out / "best.ckpt", state)
    save_checkpoint(out / "last.ckpt", state)
    if not (out / "best.ckpt").exists():
        save_checkpoint(out / "best.ckpt", state)
    train_meta = {
        "config_fingerprint": config.fingerprint,
        "steps": n_steps,
        "best_val": best_val,
        "data_order_audit": audit,
    }
    with open(out / "train_meta.json", "w", encoding="utf-8") as fh:
        json.dump(train_meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {
        "best_val": best_val,
        "loss_log": log_path,
        "last": out / "last.ckpt",
        "best": out / "best.ckpt",
    }
