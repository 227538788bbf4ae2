"""Transformer velocity network over latent frames.

Per-frame input is the concatenation of the flow state and the degraded
(LR) latent at the same frame. Conditioning enters twice: a global vector
is summed with the timestep embedding and applied as a per-block additive
shift after the first normalization, and the token sequence is attended
to via cross-attention in every block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..conditioning.embed import ConditioningBundle, sinusoidal_positions
from ..numerics import (
    ShapeError,
    Tensor,
    add,
    concat,
    layer_norm,
    matmul,
    mul,
    reshape,
    silu,
    softmax_lastaxis,
    transpose,
    uniform_fan_in,
)


@dataclass
class DiTConfig:
    depth: int = 4
    model_dim: int = 128
    num_heads: int = 4
    latent_dim: int = 64
    max_frames: int = 128
    cond_width: int = 64
    mlp_hidden: int = 256
    time_dim: int = 64
    fourier_k: int = 8
    pitch_embed_dim: int = 16
    sample_rate: int = 16000
    seed: int = 0
    dtype: str = "float64"

    def __post_init__(self):
        positives = {
            "depth": self.depth,
            "model_dim": self.model_dim,
            "num_heads": self.num_heads,
            "latent_dim": self.latent_dim,
            "max_frames": self.max_frames,
            "cond_width": self.cond_width,
            "mlp_hidden": self.mlp_hidden,
            "time_dim": self.time_dim,
            "fourier_k": self.fourier_k,
            "pitch_embed_dim": self.pitch_embed_dim,
            "sample_rate": self.sample_rate,
        }
        for name, value in positives.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.model_dim % self.num_heads != 0:
            raise ValueError(f"model_dim {self.model_dim} not divisible by num_heads {self.num_heads}")
        if self.time_dim % 2 != 0:
            raise ValueError("time_dim must be even")
        if self.dtype not in ("float32", "float64"):
            raise ValueError(f"dtype must be float32 or float64, got {self.dtype}")

    @property
    def np_dtype(self):
        return np.float32 if self.dtype == "float32" else np.float64

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def timestep_features(t: float, dim: int) -> np.ndarray:
    """Sinusoidal features of a scalar time in [0, 1], shape (1, dim)."""
    half = dim // 2
    freqs = np.exp(np.linspace(0.0, np.log(1000.0), half))
    angles = t * freqs
    return np.concatenate([np.sin(angles), np.cos(angles)]).reshape(1, dim)


def build_parameters(cfg: DiTConfig, vocab_size: int) -> dict:
    """Fan-in scaled-uniform init for weights, zeros for biases, unit LN gain."""
    rng = np.random.default_rng(cfg.seed)
    dt = cfg.np_dtype
    d, cw = cfg.model_dim, cfg.cond_width
    params: dict[str, Tensor] = {}

    def w(name, shape, fan_in=None):
        params[name] = Tensor(uniform_fan_in(rng, shape, fan_in, dt), requires_grad=True, name=name)

    def b(name, size):
        params[name] = Tensor(np.zeros(size, dtype=dt), requires_grad=True, name=name)

    def ln(prefix):
        params[f"{prefix}.g"] = Tensor(np.ones(d, dtype=dt), requires_grad=True, name=f"{prefix}.g")
        params[f"{prefix}.b"] = Tensor(np.zeros(d, dtype=dt), requires_grad=True, name=f"{prefix}.b")

    w("input_proj.w", (2 * cfg.latent_dim, d))
    b("input_proj.b", d)
    w("time_mlp.w1", (cfg.time_dim, cfg.time_dim))
    b("time_mlp.b1", cfg.time_dim)
    w("time_mlp.w2", (cfg.time_dim, cw))
    b("time_mlp.b2", cw)

    for l in range(cfg.depth):
        p = f"blocks.{l}"
        w(f"{p}.mod.w", (cw, d))
        b(f"{p}.mod.b", d)
        ln(f"{p}.ln1")
        for name in ("wq", "wk", "wv", "wo"):
            w(f"{p}.attn.{name}", (d, d))
        for name in ("bq", "bk", "bv", "bo"):
            b(f"{p}.attn.{name}", d)
        ln(f"{p}.ln2")
        w(f"{p}.xattn.wq", (d, d))
        b(f"{p}.xattn.bq", d)
        w(f"{p}.xattn.wk", (cw, d))
        b(f"{p}.xattn.bk", d)
        w(f"{p}.xattn.wv", (cw, d))
        b(f"{p}.xattn.bv", d)
        w(f"{p}.xattn.wo", (d, d))
        b(f"{p}.xattn.bo", d)
        ln(f"{p}.ln3")
        w(f"{p}.mlp.w1", (d, cfg.mlp_hidden))
        b(f"{p}.mlp.b1", cfg.mlp_hidden)
        w(f"{p}.mlp.w2", (cfg.mlp_hidden, d))
        b(f"{p}.mlp.b2", d)

    ln("final_ln")
    w("output_proj.w", (d, cfg.latent_dim))
    b("output_proj.b", cfg.latent_dim)

    w("semantic.table", (vocab_size, cw), fan_in=cw)
    w("prior.pitch_proj.w", (3, cfg.pitch_embed_dim))
    b("prior.pitch_proj.b", cfg.pitch_embed_dim)
    w("prior.bw_token.w", (2 * cfg.fourier_k, cw))
    b("prior.bw_token.b", cw)
    w("prior.pitch_token.w", (cfg.pitch_embed_dim, cw))
    b("prior.pitch_token.b", cw)
    w("prior.bw_global.w", (2 * cfg.fourier_k, cw))
    b("prior.bw_global.b", cw)
    w("prior.pitch_global.w", (cfg.pitch_embed_dim, cw))
    b("prior.pitch_global.b", cw)
    return params


def _affine(x: Tensor, params: dict, prefix: str) -> Tensor:
    return add(matmul(x, params[f"{prefix}.w"]), params[f"{prefix}.b"])


def _split_heads(x: Tensor, n_frames: int, heads: int, head_dim: int) -> Tensor:
    return transpose(reshape(x, (n_frames, heads, head_dim)), (1, 0, 2))


def _attention(q: Tensor, k: Tensor, v: Tensor, heads: int, head_dim: int, out_frames: int) -> Tensor:
    scores = mul(matmul(q, transpose(k, (0, 2, 1))), 1.0 / np.sqrt(head_dim))
    weights = softmax_lastaxis(scores)
    ctx = matmul(weights, v)
    return reshape(transpose(ctx, (1, 0, 2)), (out_frames, heads * head_dim))


def velocity_forward(
    params: dict,
    cfg: DiTConfig,
    xt: np.ndarray,
    t: float,
    lr_latent: np.ndarray,
    bundle: ConditioningBundle,
) -> Tensor:
    """Predict per-frame velocity; output shape equals the flow-state shape."""
    xt = np.asarray(xt)
    lr_latent = np.asarray(lr_latent)
    if xt.shape != lr_latent.shape:
        raise ShapeError(f"flow state {xt.shape} and LR latent {lr_latent.shape} are misaligned")
    n_frames, latent_dim = xt.shape
    if latent_dim != cfg.latent_dim:
        raise ShapeError(f"latent dim {latent_dim} != configured {cfg.latent_dim}")
    if n_frames > cfg.max_frames:
        raise ShapeError(f"{n_frames} frames exceed max_frames {cfg.max_frames}")
    dt = cfg.np_dtype
    heads, head_dim = cfg.num_heads, cfg.model_dim // cfg.num_heads

    stacked = np.concatenate([xt, lr_latent], axis=1).astype(dt)
    x = _affine(Tensor(stacked), params, "input_proj")
    x = add(x, sinusoidal_positions(n_frames, cfg.model_dim).astype(dt))

    tf = Tensor(timestep_features(t, cfg.time_dim).astype(dt))
    hidden = silu(add(matmul(tf, params["time_mlp.w1"]), params["time_mlp.b1"]))
    summary = add(matmul(hidden, params["time_mlp.w2"]), params["time_mlp.b2"])
    summary = add(summary, reshape(bundle.global_vector, (1, cfg.cond_width)))

    tokens = bundle.cross_attention_tokens
    n_tokens = tokens.shape[0]

    for l in range(cfg.depth):
        p = f"blocks.{l}"
        shift = reshape(_affine(summary, params, f"{p}.mod"), (cfg.model_dim,))

        h = add(layer_norm(x, params[f"{p}.ln1.g"], params[f"{p}.ln1.b"]), shift)
        q = _split_heads(add(matmul(h, params[f"{p}.attn.wq"]), params[f"{p}.attn.bq"]), n_frames, heads, head_dim)
        k = _split_heads(add(matmul(h, params[f"{p}.attn.wk"]), params[f"{p}.attn.bk"]), n_frames, heads, head_dim)
        v = _split_heads(add(matmul(h, params[f"{p}.attn.wv"]), params[f"{p}.attn.bv"]), n_frames, heads, head_dim)
        merged = _attention(q, k, v, heads, head_dim, n_frames)
        x = add(x, add(matmul(merged, params[f"{p}.attn.wo"]), params[f"{p}.attn.bo"]))

        h = layer_norm(x, params[f"{p}.ln2.g"], params[f"{p}.ln2.b"])
        q = _split_heads(add(matmul(h, params[f"{p}.xattn.wq"]), params[f"{p}.xattn.bq"]), n_frames, heads, head_dim)
        k = _split_heads(add(matmul(tokens, params[f"{p}.xattn.wk"]), params[f"{p}.xattn.bk"]), n_tokens, heads, head_dim)
        v = _split_heads(add(matmul(tokens, params[f"{p}.xattn.wv"]), params[f"{p}.xattn.bv"]), n_tokens, heads, head_dim)
        merged = _attention(q, k, v, heads, head_dim, n_frames)
        x = add(x, add(matmul(merged, params[f"{p}.xattn.wo"]), params[f"{p}.xattn.bo"]))

        h = layer_norm(x, params[f"{p}.ln3.g"], params[f"{p}.ln3.b"])
        inner = silu(add(matmul(h, params[f"{p}.mlp.w1"]), params[f"{p}.mlp.b1"]))
        x = add(x, add(matmul(inner, params[f"{p}.mlp.w2"]), params[f"{p}.mlp.b2"]))

    out = layer_norm(x, params["final_ln.g"], params["final_ln.b"])
    return _affine(out, params, "output_proj")
