"""Corpus manifest: JSON lines, one utterance per line."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .degrade import SNR_BYPASS, DegradationSpec


@dataclass
class ManifestEntry:
    id: str
    wav_path: str  # relative to the manifest's directory
    f0_hz: float
    content_tokens: list[str]
    slot_boundaries_s: list[tuple[float, float]]
    degradation: DegradationSpec

    def to_json_obj(self) -> dict:
        snr = self.degradation.snr_db
        return {
            "id": self.id,
            "wav_path": self.wav_path,
            "f0_hz": self.f0_hz,
            "content_tokens": self.content_tokens,
            "slot_boundaries_s": [[a, b] for a, b in self.slot_boundaries_s],
            "degradation": {
                "cutoff_hz": self.degradation.cutoff_hz,
                "snr_db": None if math.isinf(snr) and snr > 0 else snr,
                "noise_kind": self.degradation.noise_kind,
                "seed": self.degradation.rng_seed,
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ManifestEntry":
        deg = obj["degradation"]
        snr = SNR_BYPASS if deg["snr_db"] is None else float(deg["snr_db"])
        return cls(
            id=obj["id"],
            wav_path=obj["wav_path"],
            f0_hz=float(obj["f0_hz"]),
            content_tokens=list(obj["content_tokens"]),
            slot_boundaries_s=[(float(a), float(b)) for a, b in obj["slot_boundaries_s"]],
            degradation=DegradationSpec(
                cutoff_hz=float(deg["cutoff_hz"]),
                snr_db=snr,
                noise_kind=deg["noise_kind"],
                rng_seed=int(deg["seed"]),
            ),
        )


def write_manifest(path, entries: list[ManifestEntry]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry.to_json_obj()) + "\n")


def read_manifest(path) -> list[ManifestEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(ManifestEntry.from_json_obj(json.loads(line)))
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError(f"{path}: duplicate utterance ids in manifest")
    return entries


def resolve_wav(manifest_path, entry: ManifestEntry) -> Path:
    return Path(manifest_path).parent / entry.wav_path
