"""File-backed record cache, one JSON object per utterance."""

from __future__ import annotations

import json
from pathlib import Path

from .records import CoTRecord


class ConditioningCache:
    """Utterance id -> record, persisted as JSON lines with stable field order.

    Writes go through to disk immediately (single-writer contract); reads
    are served from memory. A missing id is a plain ``None``, not an error,
    so callers can fall back to the record oracle and re-put.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._records: dict[str, tuple[CoTRecord, str]] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    obj = json.loads(line)
                    record = CoTRecord(
                        gender=obj["gender"],
                        emotion=obj["emotion"],
                        noise=obj["noise"],
                        content=list(obj["content"]),
                        quality=list(obj["quality"]),
                        extras=dict(obj.get("extras", {})),
                    )
                    self._records[obj["id"]] = (record, obj.get("source", "oracle"))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise IOError(f"failed to load conditioning cache {self.path}: {exc}") from exc

    def _flush(self) -> None:
        try:
            with open(self.path, "w", encoding="utf-8") as fh:
                for uid in sorted(self._records):
                    record, source = self._records[uid]
                    obj = {
                        "id": uid,
                        "gender": record.gender,
                        "emotion": record.emotion,
                        "noise": record.noise,
                        "content": record.content,
                        "quality": record.quality,
                        "source": source,
                    }
                    if record.extras:
                        obj["extras"] = {k: record.extras[k] for k in sorted(record.extras)}
                    fh.write(json.dumps(obj) + "\n")
        except OSError as exc:
            raise IOError(f"failed to write conditioning cache {self.path}: {exc}") from exc

    def put(self, utterance_id: str, record: CoTRecord, source: str = "oracle") -> None:
        if not utterance_id:
            raise ValueError("utterance id must be non-empty")
        self._records[utterance_id] = (record, source)
        self._flush()

    def get(self, utterance_id: str):
        entry = self._records.get(utterance_id)
        return entry[0] if entry else None

    def source(self, utterance_id: str):
        entry = self._records.get(utterance_id)
        return entry[1] if entry else None

    def __len__(self) -> int:
        return len(self._records)

    def ids(self):
        return sorted(self._records)
