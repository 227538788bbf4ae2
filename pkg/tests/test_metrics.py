"""Metric closed forms and oracle cross-checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowsr.dsp import Formant, Spectrogram, SyntheticUtteranceSpec, Waveform, synth_utterance
from flowsr.evaluation import (
    lsd,
    proxy_speaker_embedding,
    speaker_embedding_stats,
    speaker_sim,
    wer,
)

SR = 16000


def spectro(mags):
    return Spectrogram(np.asarray(mags, dtype=np.float64), 512, 128, SR)


def lsd_oracle(s_ref, s_gen, floor=1e-8):
    """Literal double loop over frames and bins."""
    s_ref = np.maximum(s_ref, floor)
    s_gen = np.maximum(s_gen, floor)
    total = 0.0
    for t in range(s_ref.shape[0]):
        acc = 0.0
        for f in range(s_ref.shape[1]):
            acc += np.log10(s_ref[t, f] ** 2 / s_gen[t, f] ** 2) ** 2
        total += np.sqrt(acc / s_ref.shape[1])
    return total / s_ref.shape[0]


def wer_oracle(ref, hyp):
    """Exhaustive edit-sequence search (no DP), fine for length <= 6."""

    def rec(i, j):
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        return min(
            rec(i + 1, j + 1) + (ref[i] != hyp[j]),
            rec(i + 1, j) + 1,
            rec(i, j + 1) + 1,
        )

    return rec(0, 0) / len(ref)


class TestLsd:
    def test_identical_is_zero(self):
        s = spectro(np.random.default_rng(0).uniform(0.1, 1.0, (5, 9)))
        assert lsd(s, s) == 0.0

    def test_factor_ten_is_two(self):
        mags = np.random.default_rng(1).uniform(0.1, 1.0, (6, 8))
        assert lsd(spectro(mags), spectro(10 * mags)) == pytest.approx(2.0, abs=1e-9)

    def test_constant_factor_closed_form(self):
        mags = np.random.default_rng(2).uniform(0.1, 1.0, (4, 7))
        for c in (0.5, 3.0, 7.5):
            expected = abs(2 * np.log10(c))
            assert lsd(spectro(mags), spectro(c * mags)) == pytest.approx(expected, abs=1e-9)

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(3)
        a, b = rng.uniform(0.01, 2.0, (5, 11)), rng.uniform(0.01, 2.0, (5, 11))
        assert lsd(spectro(a), spectro(b)) == pytest.approx(lsd_oracle(a, b), abs=1e-10)

    def test_symmetric(self):
        rng = np.random.default_rng(4)
        a, b = rng.uniform(0.01, 2.0, (5, 6)), rng.uniform(0.01, 2.0, (5, 6))
        assert lsd(spectro(a), spectro(b)) == pytest.approx(lsd(spectro(b), spectro(a)), abs=1e-12)

    def test_frame_slack_truncates(self):
        rng = np.random.default_rng(5)
        a = rng.uniform(0.1, 1.0, (7, 6))
        b = np.vstack([a, rng.uniform(0.1, 1.0, (2, 6))])
        assert lsd(spectro(a), spectro(b)) == pytest.approx(0.0, abs=1e-12)

    def test_incompatible_shapes_rejected(self):
        a = spectro(np.ones((5, 6)))
        with pytest.raises(ValueError):
            lsd(a, spectro(np.ones((9, 6))))
        with pytest.raises(ValueError):
            lsd(a, spectro(np.ones((5, 7))))

    def test_highband_restriction(self):
        rng = np.random.default_rng(6)
        mags = rng.uniform(0.1, 1.0, (4, 257))
        altered = mags.copy()
        freqs = spectro(mags).bin_freqs
        altered[:, freqs >= 4000] *= 10.0
        full = lsd(spectro(mags), spectro(altered))
        high = lsd(spectro(mags), spectro(altered), lo_hz=4000.0)
        assert high == pytest.approx(2.0, abs=1e-9)
        assert full < high

    def test_silence_floored_not_infinite(self):
        a = spectro(np.zeros((3, 5)))
        b = spectro(np.ones((3, 5)))
        assert np.isfinite(lsd(a, b))


class TestWer:
    def test_identical_zero(self):
        assert wer(["a", "b", "c"], ["a", "b", "c"]) == 0.0

    def test_single_substitution_in_five(self):
        assert wer(list("abcde"), list("abXde")) == pytest.approx(0.20)

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            wer([], ["a"])

    def test_insertions_and_deletions(self):
        assert wer(["a", "b"], ["a", "x", "b"]) == pytest.approx(0.5)  # 1 insertion
        assert wer(["a", "b", "c"], ["a", "c"]) == pytest.approx(1 / 3)  # 1 deletion

    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(st.sampled_from("abc"), min_size=1, max_size=6),
        st.lists(st.sampled_from("abc"), min_size=0, max_size=6),
    )
    def test_matches_exhaustive_oracle(self, ref, hyp):
        assert wer(ref, hyp) == pytest.approx(wer_oracle(ref, hyp))

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.sampled_from("abcd"), min_size=1, max_size=6),
        st.lists(st.sampled_from("abcd"), min_size=0, max_size=6),
    )
    def test_bounds_and_identity(self, ref, hyp):
        rate = wer(ref, hyp)
        assert rate <= (len(ref) + len(hyp)) / len(ref)
        assert (rate == 0.0) == (ref == hyp)


class TestSpeakerSim:
    def test_identical_is_one(self):
        v = np.random.default_rng(0).normal(size=19)
        assert speaker_sim(v, v) == pytest.approx(1.0)

    def test_orthogonal_is_zero(self):
        a = np.array([1.0, 0.0])
        b = np.array([0.0, 2.0])
        assert speaker_sim(a, b) == pytest.approx(0.0)

    def test_matches_dot_norm_oracle(self):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=12), rng.normal(size=12)
        expected = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        assert speaker_sim(a, b) == pytest.approx(expected, abs=1e-12)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            speaker_sim(np.zeros(3), np.ones(3))

    def test_dim_mismatch_rejected(self):
        with pytest.raises(ValueError):
            speaker_sim(np.ones(3), np.ones(4))

    def test_clamped_to_unit_interval(self):
        a = np.array([1.0, 1e-300])
        assert -1.0 <= speaker_sim(a, a) <= 1.0


def speaker_spec(f0, tokens, seed, formants=None):
    return SyntheticUtteranceSpec(
        f0_hz=f0,
        vibrato_depth=0.01,
        vibrato_rate_hz=5.0,
        formants=formants or [Formant(500, 120, 1.0), Formant(1500, 200, 0.6)],
        content_tokens=tokens,
        duration_s=1.0,
        rng_seed=seed,
    )


@pytest.fixture(scope="module")
def pool():
    # Several distinct "speakers", two takes each with different content.
    specs, f0s = [], (100, 130, 170, 220, 280, 340)
    for i, f0 in enumerate(f0s):
        formants = [Formant(400 + 60 * i, 120, 1.0), Formant(1400 + 90 * i, 220, 0.5)]
        specs.append(speaker_spec(f0, ["S1", "S2", "S3"], seed=2 * i, formants=formants))
        specs.append(speaker_spec(f0, ["S7", "S8", "S9"], seed=2 * i + 1, formants=formants))
    waves = [synth_utterance(s, SR)[0] for s in specs]
    stats = speaker_embedding_stats([proxy_speaker_embedding(w) for w in waves])
    return waves, stats


class TestProxyEmbedding:
    def test_same_waveform_identical(self, pool):
        waves, stats = pool
        a = proxy_speaker_embedding(waves[0], stats)
        b = proxy_speaker_embedding(waves[0], stats)
        np.testing.assert_array_equal(a, b)

    def test_same_speaker_different_content_high_cosine(self, pool):
        waves, stats = pool
        for i in range(0, len(waves), 2):
            a = proxy_speaker_embedding(waves[i], stats)
            b = proxy_speaker_embedding(waves[i + 1], stats)
            assert speaker_sim(a, b) >= 0.9

    def test_different_f0_lower_cosine_than_same_speaker(self, pool):
        waves, stats = pool
        same = speaker_sim(
            proxy_speaker_embedding(waves[0], stats), proxy_speaker_embedding(waves[1], stats)
        )
        # 100 Hz speaker vs the 280 Hz speaker
        cross = speaker_sim(
            proxy_speaker_embedding(waves[0], stats), proxy_speaker_embedding(waves[8], stats)
        )
        assert cross < same

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            proxy_speaker_embedding(Waveform(np.zeros(1000), SR))
