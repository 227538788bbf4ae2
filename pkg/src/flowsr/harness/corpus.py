"""Corpus synthesis command: speakers, utterances, splits, cache, manifests.

A "speaker" is a (base F0, formant envelope) tuple. Speakers are split
90/5/5 across train/val/test so no identity crosses subsets; every
utterance gets an assigned degradation recorded in its manifest entry and
an oracle record in the conditioning cache.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..conditioning.cache import ConditioningCache
from ..conditioning.oracle import record_for_utterance
from ..dsp.degrade import DegradationSpec
from ..dsp.manifest import ManifestEntry, write_manifest
from ..dsp.synth import Formant, SyntheticUtteranceSpec, default_vocab, synth_utterance
from ..dsp.waveform import write_wav
from .config import RunConfig

SPLITS = ("train", "val", "test")


@dataclass
class Speaker:
    speaker_id: int
    f0_base_hz: float
    formants: list[Formant]
    split: str


def _speaker_rng(seed: int, speaker: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1, speaker)))


def _utterance_rng(seed: int, speaker: int, j: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(2, speaker, j)))


def make_speakers(config: RunConfig) -> list[Speaker]:
    corpus = config["corpus"]
    n = corpus["n_speakers"]
    n_val = max(1, round(0.05 * n))
    n_test = max(1, round(0.05 * n))
    speakers = []
    f_lo, f_hi = corpus["f0_range_hz"]
    for s in range(n):
        rng = _speaker_rng(corpus["seed"], s)
        f0 = float(rng.uniform(f_lo, f_hi))
        formants = [
            Formant(float(rng.uniform(350, 800)), float(rng.uniform(90, 150)), 1.0),
            Formant(float(rng.uniform(1100, 1900)), float(rng.uniform(150, 280)), float(rng.uniform(0.4, 0.7))),
            Formant(float(rng.uniform(2300, 3200)), float(rng.uniform(200, 350)), float(rng.uniform(0.2, 0.5))),
        ]
        if s < n - n_val - n_test:
            split = "train"
        elif s < n - n_test:
            split = "val"
        else:
            split = "test"
        speakers.append(Speaker(speaker_id=s, f0_base_hz=f0, formants=formants, split=split))
    return speakers


def cmd_synth_data(config: RunConfig, out_dir) -> dict:
    """Write WAVs, per-split manifests, the record cache, and corpus meta.

    Returns {"train": n, "val": n, "test": n} utterance counts.
    """
    out = Path(out_dir)
    (out / "wavs").mkdir(parents=True, exist_ok=True)
    corpus = config["corpus"]
    deg_cfg = config["degradation"]
    sr = config["sample_rate"]
    vocab = default_vocab(corpus["vocab_size"])
    speakers = make_speakers(config)
    per_speaker = corpus["count"] // corpus["n_speakers"]

    cache = ConditioningCache(out / "cot_cache.jsonl")
    entries: dict[str, list[ManifestEntry]] = {s: [] for s in SPLITS}
    counter = 0
    for speaker in speakers:
        for j in range(per_speaker):
            rng = _utterance_rng(corpus["seed"], speaker.speaker_id, j)
            n_tok = int(rng.integers(corpus["tokens_per_utterance"][0],
                                     corpus["tokens_per_utterance"][1] + 1))
            tokens = [vocab[int(rng.integers(len(vocab)))] for _ in range(n_tok)]
            duration = float(rng.uniform(*corpus["duration_s"]))
            spec = SyntheticUtteranceSpec(
                f0_hz=speaker.f0_base_hz,
                vibrato_depth=float(rng.uniform(0.0, 0.02)),
                vibrato_rate_hz=float(rng.uniform(3.0, 7.0)),
                formants=speaker.formants,
                content_tokens=tokens,
                duration_s=duration,
                rng_seed=int(rng.integers(2 ** 31)),
            )
            wave, labels = synth_utterance(spec, sr)

            uid = f"spk{speaker.speaker_id:03d}_utt{j:03d}"
            wav_rel = f"wavs/{uid}.wav"
            write_wav(out / wav_rel, wave)

            grid = deg_cfg["cutoff_grid_hz"]
            deg_rng = np.random.default_rng(
                np.random.SeedSequence(entropy=deg_cfg["seed"], spawn_key=(counter,))
            )
            degradation = DegradationSpec(
                cutoff_hz=float(grid[int(deg_rng.integers(len(grid)))]),
                snr_db=float(deg_rng.uniform(*deg_cfg["snr_range_db"])),
                noise_kind=deg_cfg["noise_kinds"][int(deg_rng.integers(len(deg_cfg["noise_kinds"])))],
                rng_seed=int(deg_rng.integers(2 ** 31)),
            )
            cache.put(uid, record_for_utterance(labels, degradation, sr / 2))
            entries[speaker.split].append(
                ManifestEntry(
                    id=uid,
                    wav_path=wav_rel,
                    f0_hz=labels.f0_hz,
                    content_tokens=labels.tokens,
                    slot_boundaries_s=labels.slot_boundaries_s,
                    degradation=degradation,
                )
            )
            counter += 1

    for split in SPLITS:
        write_manifest(out / f"{split}.jsonl", entries[split])
    meta = {
        "config_fingerprint": config.fingerprint,
        "sample_rate": sr,
        "content_vocab": vocab,
        "speakers": [
            {
                "id": s.speaker_id,
                "split": s.split,
                "f0_base_hz": s.f0_base_hz,
                "formants": [[f.center_hz, f.width_hz, f.gain] for f in s.formants],
            }
            for s in speakers
        ],
    }
    with open(out / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {split: len(entries[split]) for split in SPLITS}
