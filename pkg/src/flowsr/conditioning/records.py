"""Structured semantic records with a bracketed key grammar.

Records carry five required fields (gender, emotion, noise, content,
quality) written as ``[Key]: value`` segments joined by ``"; "``. Parsing
is case-insensitive on keys, tolerant of a trailing period, and keeps
unknown keys in a spillover map; serialization is canonical and
deterministic so serialize . parse normalizes any valid text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

GENDERS = ("male", "female", "unknown")
REQUIRED_KEYS = ("gender", "emotion", "noise", "content", "quality")
EMPTY_CONTENT_MARKER = "<empty>"


class CoTParseError(ValueError):
    """A structurally valid record missing required fields."""

    def __init__(self, missing_keys):
        self.missing_keys = tuple(missing_keys)
        super().__init__(f"record is missing required keys: {', '.join(self.missing_keys)}")


class CoTSyntaxError(ValueError):
    """Malformed bracket syntax; ``byte_offset`` points at the violation."""

    def __init__(self, message: str, byte_offset: int):
        self.byte_offset = byte_offset
        super().__init__(f"{message} (byte offset {byte_offset})")


@dataclass
class CoTRecord:
    gender: str  # one of GENDERS
    emotion: str
    noise: str
    content: list[str]
    quality: list[str]
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}, got {self.gender!r}")


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _scan_fields(text: str):
    """Yield (key, value, key_index) per segment, enforcing the grammar."""
    i = 0
    n = len(text)
    while i < n:
        while i < n and text[i] in " \t\r\n":
            i += 1
        if i >= n:
            break
        if text[i] != "[":
            raise CoTSyntaxError(f"expected '[' to open a key, found {text[i]!r}", _byte_offset(text, i))
        close = text.find("]", i + 1)
        if close < 0:
            raise CoTSyntaxError("unterminated key: missing ']'", _byte_offset(text, i))
        key = text[i + 1:close].strip()
        if not key:
            raise CoTSyntaxError("empty key between brackets", _byte_offset(text, i))
        j = close + 1
        while j < n and text[j] in " \t":
            j += 1
        if j >= n or text[j] != ":":
            raise CoTSyntaxError(f"expected ':' after [{key}]", _byte_offset(text, j if j < n else n))
        j += 1
        # Value runs to the next "; [" boundary or end of text.
        k = j
        end = n
        while True:
            semi = text.find(";", k)
            if semi < 0:
                break
            rest = semi + 1
            while rest < n and text[rest] in " \t\r\n":
                rest += 1
            if rest >= n or text[rest] == "[":
                end = semi
                break
            k = semi + 1
        yield key, text[j:end].strip(), i
        i = end + 1


def parse_cot(text: str) -> CoTRecord:
    if not text or not text.strip():
        raise CoTSyntaxError("empty record text", 0)
    normalized = text.strip()
    if normalized.endswith("."):
        normalized = normalized[:-1]

    seen: dict[str, str] = {}
    extras: dict[str, str] = {}
    for key, value, _ in _scan_fields(normalized):
        lowered = key.lower()
        if lowered in REQUIRED_KEYS:
            seen[lowered] = value
        else:
            extras[key] = value

    missing = [k for k in REQUIRED_KEYS if k not in seen]
    if missing:
        raise CoTParseError(missing)

    gender = seen["gender"].strip().lower()
    if gender not in GENDERS:
        gender = "unknown"
    content_text = seen["content"].strip()
    if content_text.lower() == EMPTY_CONTENT_MARKER:
        content: list[str] = []
    else:
        content = content_text.split()
        if not content:
            raise CoTParseError(["content"])
    quality = [q.strip() for q in seen["quality"].split(",") if q.strip()]
    return CoTRecord(
        gender=gender,
        emotion=seen["emotion"],
        noise=seen["noise"],
        content=content,
        quality=quality,
        extras=extras,
    )


def serialize_cot(record: CoTRecord) -> str:
    """Canonical text: fixed field order, '; ' separators, no trailing period."""
    content = " ".join(record.content) if record.content else EMPTY_CONTENT_MARKER
    parts = [
        f"[Gender]: {record.gender.capitalize()}",
        f"[Emotion]: {record.emotion}",
        f"[Noise]: {record.noise}",
        f"[Content]: {content}",
        f"[Quality]: {', '.join(record.quality)}",
    ]
    for key in sorted(record.extras):
        parts.append(f"[{key}]: {record.extras[key]}")
    return "; ".join(parts)
