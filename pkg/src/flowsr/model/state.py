"""Trainable model state and its checkpoint format.

A checkpoint is the flat parameter container (parameters, optimizer
moments, latent statistics) plus a JSON sidecar carrying the config,
vocabulary, ablation flags, seeds, and step counters. Round trips are
value-exact, so reloaded states produce bitwise identical forwards.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..conditioning.embed import (
    Vocabulary,
    assemble_conditioning,
    embed_pitch_stats,
    embed_semantic,
    fourier_embed_bandwidth,
)
from ..conditioning.records import CoTRecord
from ..dsp.mdct import LatentStats
from ..dsp.pitch import PitchStats
from ..numerics import AdamWState, Tensor, load_arrays, save_arrays
from .dit import DiTConfig, build_parameters


@dataclass
class AblationFlags:
    disable_cot: bool = False
    transcript_only: bool = False
    disable_acoustic_priors: bool = False

    def semantic_mode(self) -> str:
        if self.disable_cot:
            return "null"
        if self.transcript_only:
            return "transcript"
        return "full"


@dataclass
class ModelState:
    config: DiTConfig
    params: dict
    opt: AdamWState
    vocab: Vocabulary
    latent_stats: LatentStats
    ablation: AblationFlags = field(default_factory=AblationFlags)
    seed: int = 0  # training stream seed
    step: int = 0

    @classmethod
    def initialize(
        cls,
        config: DiTConfig,
        vocab: Vocabulary,
        latent_stats: LatentStats,
        opt: AdamWState,
        ablation: AblationFlags | None = None,
        seed: int = 0,
    ) -> "ModelState":
        params = build_parameters(config, len(vocab))
        return cls(
            config=config,
            params=params,
            opt=opt,
            vocab=vocab,
            latent_stats=latent_stats,
            ablation=ablation or AblationFlags(),
            seed=seed,
        )

    def build_bundle(self, record: CoTRecord, cutoff_hz: float, pitch: PitchStats):
        """Ablation-aware conditioning assembly for one utterance."""
        sem = embed_semantic(
            record, self.vocab, self.params["semantic.table"], mode=self.ablation.semantic_mode()
        )
        c_bw = fourier_embed_bandwidth(cutoff_hz, self.config.fourier_k, self.config.sample_rate)
        c_pitch = embed_pitch_stats(
            pitch, self.params["prior.pitch_proj.w"], self.params["prior.pitch_proj.b"]
        )
        return assemble_conditioning(
            sem,
            c_bw,
            c_pitch,
            self.params,
            self.config.cond_width,
            include_priors=not self.ablation.disable_acoustic_priors,
        )


def save_checkpoint(path, state: ModelState) -> None:
    path = Path(path)
    arrays = {name: p.data for name, p in state.params.items()}
    for name, m in state.opt.m.items():
        arrays[f"opt.m.{name}"] = m
    for name, v in state.opt.v.items():
        arrays[f"opt.v.{name}"] = v
    arrays["latent_stats.mean"] = state.latent_stats.mean
    arrays["latent_stats.std"] = state.latent_stats.std
    save_arrays(
        path,
        arrays,
        precision=state.config.dtype,
        seed=state.seed,
        meta={"step": state.step, "opt_step": state.opt.step},
    )
    sidecar = {
        "config": state.config.to_dict(),
        "vocab_tokens": state.vocab.tokens,
        "ablation": asdict(state.ablation),
        "latent_stats_id": state.latent_stats.stats_id,
        "seed": state.seed,
        "step": state.step,
        "opt": {
            "lr": state.opt.lr,
            "beta1": state.opt.beta1,
            "beta2": state.opt.beta2,
            "epsilon": state.opt.epsilon,
            "weight_decay": state.opt.weight_decay,
            "step": state.opt.step,
        },
    }
    with open(path.with_suffix(path.suffix + ".json"), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_checkpoint(path) -> ModelState:
    path = Path(path)
    arrays, header = load_arrays(path)
    with open(path.with_suffix(path.suffix + ".json"), "r", encoding="utf-8") as fh:
        sidecar = json.load(fh)

    config = DiTConfig(**sidecar["config"])
    vocab = Vocabulary.from_tokens(sidecar["vocab_tokens"])

    stats = LatentStats(
        mean=arrays.pop("latent_stats.mean"),
        std=arrays.pop("latent_stats.std"),
        stats_id=sidecar["latent_stats_id"],
    )
    opt_cfg = sidecar["opt"]
    opt = AdamWState(
        lr=opt_cfg["lr"],
        beta1=opt_cfg["beta1"],
        beta2=opt_cfg["beta2"],
        epsilon=opt_cfg["epsilon"],
        weight_decay=opt_cfg["weight_decay"],
        step=opt_cfg["step"],
    )
    params: dict[str, Tensor] = {}
    for name in list(arrays):
        if name.startswith("opt.m."):
            opt.m[name[len("opt.m."):]] = arrays.pop(name)
        elif name.startswith("opt.v."):
            opt.v[name[len("opt.v."):]] = arrays.pop(name)
    for name, data in arrays.items():
        params[name] = Tensor(data, requires_grad=True, name=name)

    return ModelState(
        config=config,
        params=params,
        opt=opt,
        vocab=vocab,
        latent_stats=stats,
        ablation=AblationFlags(**sidecar["ablation"]),
        seed=sidecar["seed"],
        step=sidecar["step"],
    )
