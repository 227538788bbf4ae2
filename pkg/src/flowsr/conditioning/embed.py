"""Embedding stack: semantic tokens, acoustic priors, and their assembly.

The semantic side looks records up in a trainable table over a closed
vocabulary (field markers + label words + content words + UNK/NULL). The
acoustic side maps the estimated bandwidth through fixed Fourier features
and the pitch summary through a small learned projection. Both priors
feed the model twice: as extra cross-attention tokens and, summed, as a
global vector added to the timestep embedding.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..dsp.pitch import PitchStats
from ..numerics import ShapeError, Tensor, add, concat, embedding, matmul, reshape, silu
from .oracle import EMOTIONS, NOISE_LABELS, QUALITY_LABELS
from .records import GENDERS, CoTRecord

MARKERS = ("<GENDER>", "<EMOTION>", "<NOISE>", "<CONTENT>", "<QUALITY>")
UNK, NULL = "<UNK>", "<NULL>"

FOURIER_FREQ_LO = 1.0
FOURIER_FREQ_HI = 64.0
PITCH_F0_SCALE_HZ = 500.0


@dataclass
class Vocabulary:
    tokens: list[str]
    index: dict
    vocab_id: str

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "Vocabulary":
        vocab_id = hashlib.sha256("\x1f".join(tokens).encode("utf-8")).hexdigest()[:16]
        return cls(tokens=list(tokens), index={t: i for i, t in enumerate(tokens)}, vocab_id=vocab_id)

    @classmethod
    def build(cls, content_vocab: list[str]) -> "Vocabulary":
        tokens = [*MARKERS, UNK, NULL, *GENDERS, *EMOTIONS, *NOISE_LABELS, *QUALITY_LABELS]
        for tok in content_vocab:
            if tok not in tokens:
                tokens.append(tok)
        return cls.from_tokens(tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def id_of(self, token: str) -> int:
        return self.index.get(token, self.index[UNK])


@dataclass
class SemanticEmbedding:
    vectors: Tensor  # (len, width), at least one row
    vocab_id: str

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass
class ConditioningBundle:
    cross_attention_tokens: Tensor  # (token_count, cond_width)
    global_vector: Tensor  # (cond_width,)

    @property
    def token_count(self) -> int:
        return self.cross_attention_tokens.shape[0]


def sinusoidal_positions(n: int, dim: int) -> np.ndarray:
    pos = np.arange(n)[:, None].astype(np.float64)
    div = np.exp(np.arange(0, dim, 2) / dim * -np.log(10000.0))
    enc = np.zeros((n, dim))
    enc[:, 0::2] = np.sin(pos * div)
    enc[:, 1::2] = np.cos(pos * div[: (dim + 1) // 2])
    return enc


def record_token_ids(record: CoTRecord, vocab: Vocabulary, mode: str = "full") -> np.ndarray:
    """Token id sequence for a record.

    Modes: ``full`` interleaves field markers with values; ``transcript``
    keeps only the content words; ``null`` collapses everything to the
    single learned NULL token (conditioning ablations).
    """
    if mode == "null":
        return np.array([vocab.index[NULL]], dtype=np.int64)
    if mode == "transcript":
        ids = [vocab.id_of(t) for t in record.content]
        return np.array(ids or [vocab.index[NULL]], dtype=np.int64)
    if mode != "full":
        raise ValueError(f"unknown semantic mode {mode!r}")
    ids = [
        vocab.index["<GENDER>"], vocab.id_of(record.gender),
        vocab.index["<EMOTION>"], vocab.id_of(record.emotion),
        vocab.index["<NOISE>"], vocab.id_of(record.noise),
        vocab.index["<CONTENT>"], *(vocab.id_of(t) for t in record.content),
        vocab.index["<QUALITY>"], *(vocab.id_of(q) for q in record.quality),
    ]
    return np.array(ids, dtype=np.int64)


def embed_semantic(record: CoTRecord, vocab: Vocabulary, table: Tensor, mode: str = "full") -> SemanticEmbedding:
    ids = record_token_ids(record, vocab, mode)
    vectors = embedding(table, ids)
    positions = sinusoidal_positions(len(ids), table.shape[1]).astype(table.dtype)
    return SemanticEmbedding(vectors=add(vectors, positions), vocab_id=vocab.vocab_id)


def fourier_embed_bandwidth(cutoff_hz: float, n_frequencies: int, sample_rate: int) -> np.ndarray:
    nyquist = sample_rate / 2.0
    if not 0 < cutoff_hz <= nyquist:
        raise ValueError(f"cutoff {cutoff_hz} Hz outside (0, {nyquist}]")
    b = cutoff_hz / nyquist
    freqs = np.logspace(np.log10(FOURIER_FREQ_LO), np.log10(FOURIER_FREQ_HI), n_frequencies)
    angles = 2 * np.pi * freqs * b
    return np.concatenate([np.sin(angles), np.cos(angles)])


def embed_pitch_stats(stats: PitchStats, weight: Tensor, bias: Tensor) -> Tensor:
    """(median/500, log-F0 std, voiced fraction) through affine + SiLU."""
    raw = np.array([stats.median_f0_hz / PITCH_F0_SCALE_HZ, stats.log_f0_std, stats.voiced_fraction])
    x = Tensor(raw.reshape(1, -1).astype(weight.dtype))
    return reshape(silu(add(matmul(x, weight), bias)), (weight.shape[1],))


def assemble_conditioning(
    sem: SemanticEmbedding,
    c_bw: np.ndarray,
    c_pitch: Tensor,
    params: dict,
    cond_width: int,
    include_priors: bool = True,
) -> ConditioningBundle:
    if sem.vectors.shape[1] != cond_width:
        raise ShapeError(f"semantic width {sem.vectors.shape[1]} != conditioning width {cond_width}")
    if not include_priors:
        zero = Tensor(np.zeros(cond_width, dtype=sem.vectors.dtype))
        return ConditioningBundle(cross_attention_tokens=sem.vectors, global_vector=zero)

    dtype = sem.vectors.dtype
    bw = Tensor(np.asarray(c_bw, dtype=dtype).reshape(1, -1))
    pitch = reshape(c_pitch, (1, c_pitch.shape[0]))

    def project(x, w_key, b_key):
        w, b = params[w_key], params[b_key]
        if x.shape[1] != w.shape[0] or w.shape[1] != cond_width:
            raise ShapeError(
                f"prior projection {w_key}: {x.shape} @ {w.shape} incompatible with width {cond_width}"
            )
        return add(matmul(x, w), b)

    token_bw = project(bw, "prior.bw_token.w", "prior.bw_token.b")
    token_pitch = project(pitch, "prior.pitch_token.w", "prior.pitch_token.b")
    tokens = concat([sem.vectors, token_bw, token_pitch], axis=0)

    glob_bw = project(bw, "prior.bw_global.w", "prior.bw_global.b")
    glob_pitch = project(pitch, "prior.pitch_global.w", "prior.pitch_global.b")
    global_vector = reshape(add(glob_bw, glob_pitch), (cond_width,))
    return ConditioningBundle(cross_attention_tokens=tokens, global_vector=global_vector)
