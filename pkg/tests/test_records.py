"""Record grammar: parsing, canonical serialization, round trips."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowsr.conditioning import (
    EMPTY_CONTENT_MARKER,
    CoTParseError,
    CoTRecord,
    CoTSyntaxError,
    parse_cot,
    serialize_cot,
)

EXAMPLE = (
    "[Gender]: Male; [Emotion]: Anxious; [Noise]: Street traffic; "
    "[Content]: Help is on the way; [Quality]: Low bandwidth, muffled."
)


class TestParse:
    def test_reference_example(self):
        record = parse_cot(EXAMPLE)
        assert record.gender == "male"
        assert record.emotion == "Anxious"
        assert record.noise == "Street traffic"
        assert record.content == ["Help", "is", "on", "the", "way"]
        assert record.quality == ["Low bandwidth", "muffled"]

    def test_serialize_after_parse_normalizes(self):
        text = serialize_cot(parse_cot(EXAMPLE))
        assert text == EXAMPLE[:-1]  # canonical form drops the trailing period
        # Canonical text is a fixed point.
        assert serialize_cot(parse_cot(text)) == text

    def test_keys_case_insensitive(self):
        record = parse_cot(
            "[gender]: female; [EMOTION]: calm; [Noise]: none; [content]: S1 S2; [QUALITY]: clean"
        )
        assert record.gender == "female"
        assert record.content == ["S1", "S2"]

    def test_missing_keys_listed(self):
        with pytest.raises(CoTParseError) as err:
            parse_cot("[Gender]: Male")
        assert set(err.value.missing_keys) == {"emotion", "noise", "content", "quality"}

    def test_unknown_keys_spill_over(self):
        record = parse_cot(EXAMPLE[:-1] + "; [Speaker]: p225")
        assert record.extras == {"Speaker": "p225"}

    def test_unknown_gender_maps_to_unknown(self):
        record = parse_cot(
            "[Gender]: robot; [Emotion]: calm; [Noise]: none; [Content]: S0; [Quality]: clean"
        )
        assert record.gender == "unknown"

    def test_empty_content_marker(self):
        record = parse_cot(
            f"[Gender]: Male; [Emotion]: calm; [Noise]: none; [Content]: {EMPTY_CONTENT_MARKER}; "
            "[Quality]: clean"
        )
        assert record.content == []

    def test_whitespace_trimmed(self):
        record = parse_cot(
            "  [Gender]:   Male ;  [Emotion]: calm; [Noise]: none; [Content]:  S0  S1 ; [Quality]: clean  "
        )
        assert record.content == ["S0", "S1"]
        assert record.emotion == "calm"


class TestSyntaxErrors:
    def test_missing_open_bracket_offset(self):
        with pytest.raises(CoTSyntaxError) as err:
            parse_cot("Gender]: Male")
        assert err.value.byte_offset == 0

    def test_unterminated_key(self):
        with pytest.raises(CoTSyntaxError, match="']'"):
            parse_cot("[Gender: Male")

    def test_missing_colon_offset(self):
        with pytest.raises(CoTSyntaxError) as err:
            parse_cot("[Gender] Male")
        assert err.value.byte_offset == 9  # the 'M' where ':' was expected

    def test_empty_key(self):
        with pytest.raises(CoTSyntaxError):
            parse_cot("[]: value")

    def test_empty_text(self):
        with pytest.raises(CoTSyntaxError):
            parse_cot("   ")

    def test_byte_offset_counts_utf8_bytes(self):
        # The two-byte 'É' before the violation shifts the byte offset past
        # the character index.
        with pytest.raises(CoTSyntaxError) as err:
            parse_cot("[Émotion] x")
        assert err.value.byte_offset == 11


class TestSerialize:
    def test_round_trip_identity_on_records(self):
        record = CoTRecord(
            gender="female",
            emotion="animated",
            noise="mains hum",
            content=["S3", "S1"],
            quality=["band limited", "noisy background"],
        )
        assert parse_cot(serialize_cot(record)) == record

    def test_deterministic_bytes(self):
        r1 = CoTRecord("male", "calm", "hiss", ["S0"], ["clean"])
        r2 = CoTRecord("male", "calm", "hiss", ["S0"], ["clean"])
        assert serialize_cot(r1).encode() == serialize_cot(r2).encode()

    def test_empty_content_serializes_marker(self):
        record = CoTRecord("male", "calm", "none", [], ["clean"])
        assert f"[Content]: {EMPTY_CONTENT_MARKER}" in serialize_cot(record)

    def test_invalid_gender_rejected_at_construction(self):
        with pytest.raises(ValueError):
            CoTRecord("banana", "calm", "none", ["S0"], ["clean"])


_word = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=8
)


@settings(max_examples=60, deadline=None)
@given(
    gender=st.sampled_from(["male", "female", "unknown"]),
    emotion=_word,
    noise=st.lists(_word, min_size=1, max_size=2).map(" ".join),
    content=st.lists(_word, min_size=0, max_size=5),
    quality=st.lists(_word, min_size=1, max_size=3),
)
def test_parse_serialize_round_trip_property(gender, emotion, noise, content, quality):
    record = CoTRecord(gender, emotion, noise, content, quality)
    assert parse_cot(serialize_cot(record)) == record
