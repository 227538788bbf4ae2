"""Declarative run configuration with strict parsing.

One JSON file drives every command. Parsing is strict both ways: a
missing required key or an unknown key aborts before any side effect.
The canonical serialization's SHA-256 prefix is the config fingerprint
embedded in every artifact.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    pass


_NUMBER = (int, float)

# Schema nodes: dict -> required keys with sub-schemas; tuple of types ->
# scalar; ("list", node) -> homogeneous list; ("pair", type) -> 2-list;
# ("nullable", types) -> scalar or null.
SCHEMA = {
    "sample_rate": (int,),
    "corpus": {
        "count": (int,),
        "n_speakers": (int,),
        "duration_s": ("pair", _NUMBER),
        "f0_range_hz": ("pair", _NUMBER),
        "vocab_size": (int,),
        "tokens_per_utterance": ("pair", int),
        "seed": (int,),
    },
    "degradation": {
        "cutoff_grid_hz": ("list", _NUMBER),
        "snr_range_db": ("pair", _NUMBER),
        "noise_kinds": ("list", (str,)),
        "seed": (int,),
    },
    "model": {
        "depth": (int,),
        "model_dim": (int,),
        "num_heads": (int,),
        "latent_dim": (int,),
        "max_frames": (int,),
        "cond_width": (int,),
        "mlp_hidden": (int,),
        "time_dim": (int,),
        "fourier_k": (int,),
        "pitch_embed_dim": (int,),
        "dtype": (str,),
        "seed": (int,),
    },
    "training": {
        "steps": (int,),
        "batch_size": (int,),
        "lr": _NUMBER,
        "beta1": _NUMBER,
        "beta2": _NUMBER,
        "epsilon": _NUMBER,
        "weight_decay": _NUMBER,
        "val_every": (int,),
        "val_items": (int,),
        "seed": (int,),
    },
    "evaluation": {
        "conditions": ("list", {"cutoff_hz": _NUMBER, "snr_db": ("nullable", _NUMBER)}),
        "steps": (int,),
        "seed": (int,),
    },
    "ablation": {
        "disable_cot": (bool,),
        "transcript_only": (bool,),
        "disable_acoustic_priors": (bool,),
    },
}


def _check(node, value, path: str):
    if isinstance(node, dict):
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected an object")
        unknown = set(value) - set(node)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        missing = set(node) - set(value)
        if missing:
            raise ConfigError(f"{path}: missing required keys {sorted(missing)}")
        for key, sub in node.items():
            _check(sub, value[key], f"{path}.{key}" if path else key)
        return
    if isinstance(node, tuple) and node and node[0] == "list":
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list")
        for i, item in enumerate(value):
            _check(node[1], item, f"{path}[{i}]")
        return
    if isinstance(node, tuple) and node and node[0] == "pair":
        if not (isinstance(value, list) and len(value) == 2):
            raise ConfigError(f"{path}: expected a [lo, hi] pair")
        for i, item in enumerate(value):
            _check(node[1] if isinstance(node[1], tuple) else (node[1],), item, f"{path}[{i}]")
        return
    if isinstance(node, tuple) and node and node[0] == "nullable":
        if value is None:
            return
        _check(node[1] if isinstance(node[1], tuple) else (node[1],), value, path)
        return
    # scalar type tuple
    types = node if isinstance(node, tuple) else (node,)
    if isinstance(value, bool) and bool not in types:
        raise ConfigError(f"{path}: expected {types}, got a boolean")
    if not isinstance(value, types):
        names = "/".join(t.__name__ for t in types)
        raise ConfigError(f"{path}: expected {names}, got {type(value).__name__}")


@dataclass
class RunConfig:
    raw: dict

    def __getitem__(self, key):
        return self.raw[key]

    @property
    def fingerprint(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        _check(SCHEMA, obj, "")
        cfg = cls(raw=obj)
        cfg._validate_semantics()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(obj)

    def _validate_semantics(self) -> None:
        corpus = self.raw["corpus"]
        if corpus["count"] <= 0 or corpus["n_speakers"] <= 0:
            raise ConfigError("corpus.count and corpus.n_speakers must be positive")
        if corpus["count"] % corpus["n_speakers"] != 0:
            raise ConfigError("corpus.count must be divisible by corpus.n_speakers")
        lo, hi = corpus["duration_s"]
        if not 0.5 <= lo <= hi <= 4.0:
            raise ConfigError("corpus.duration_s must lie within [0.5, 4.0]")
        f_lo, f_hi = corpus["f0_range_hz"]
        if not 70 <= f_lo <= f_hi <= 400:
            raise ConfigError("corpus.f0_range_hz must lie within [70, 400]")
        if not self.raw["degradation"]["cutoff_grid_hz"]:
            raise ConfigError("degradation.cutoff_grid_hz must be non-empty")
        if not self.raw["evaluation"]["conditions"]:
            raise ConfigError("evaluation.conditions must be non-empty")
        if self.raw["training"]["batch_size"] <= 0 or self.raw["training"]["steps"] < 0:
            raise ConfigError("training.steps/batch_size out of range")

    def dit_config(self):
        from ..model.dit import DiTConfig

        m = self.raw["model"]
        return DiTConfig(sample_rate=self.raw["sample_rate"], **m)

    def adamw(self):
        from ..numerics import AdamWState

        t = self.raw["training"]
        return AdamWState(
            lr=float(t["lr"]),
            beta1=float(t["beta1"]),
            beta2=float(t["beta2"]),
            epsilon=float(t["epsilon"]),
            weight_decay=float(t["weight_decay"]),
        )

    def ablation_flags(self):
        from ..model.state import AblationFlags

        return AblationFlags(**self.raw["ablation"])

    def eval_conditions(self):
        from ..evaluation.report import EvalCondition

        return [
            EvalCondition(cutoff_hz=float(c["cutoff_hz"]),
                          snr_db=None if c["snr_db"] is None else float(c["snr_db"]))
            for c in self.raw["evaluation"]["conditions"]
        ]
