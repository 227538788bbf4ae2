"""Low-pass and SNR contracts of the degradation pipeline."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowsr.dsp import (
    SNR_BYPASS,
    DegradationSpec,
    SilentSignalError,
    Waveform,
    add_noise_at_snr,
    degrade,
    lowpass,
    make_noise,
    snr_scale,
)

SR = 16000


def band_power_oracle(samples, sr, lo, hi):
    # Hann-windowed whole-signal periodogram; the window keeps edge
    # truncation from leaking passband energy into the measured band.
    windowed = samples * np.hanning(len(samples))
    spec = np.fft.rfft(windowed)
    freqs = np.fft.rfftfreq(len(samples), 1.0 / sr)
    mask = (freqs >= lo) & (freqs < hi)
    return float(np.mean(np.abs(spec[mask]) ** 2))


@pytest.fixture(scope="module")
def white():
    rng = np.random.default_rng(0)
    return Waveform(rng.standard_normal(SR) * 0.1, SR)


class TestLowpass:
    def test_stopband_attenuation(self, white):
        out = lowpass(white, 2000.0)
        before = band_power_oracle(white.samples, SR, 4000, 8000)
        after = band_power_oracle(out.samples, SR, 4000, 8000)
        assert 10 * math.log10(after / before) <= -60.0

    def test_passband_tone_preserved_near_nyquist(self):
        t = np.arange(SR) / SR
        tone = Waveform(0.5 * np.sin(2 * np.pi * 1000 * t), SR)
        out = lowpass(tone, SR / 2 - 1.0)
        # Compare steady-state amplitude away from the edges.
        amp = np.abs(out.samples[2000:-2000]).max()
        assert abs(20 * math.log10(amp / 0.5)) <= 0.1

    def test_zero_in_zero_out(self):
        out = lowpass(Waveform(np.zeros(4000), SR), 3000.0)
        np.testing.assert_array_equal(out.samples, np.zeros(4000))

    def test_delay_compensated(self):
        # An impulse comes back centered where it went in.
        x = np.zeros(4001)
        x[2000] = 1.0
        out = lowpass(Waveform(x, SR), 4000.0)
        assert abs(int(np.argmax(out.samples)) - 2000) <= 1

    def test_cutoff_range_checked(self, white):
        with pytest.raises(ValueError):
            lowpass(white, 0.0)
        with pytest.raises(ValueError):
            lowpass(white, SR / 2)

    def test_linearity(self):
        rng = np.random.default_rng(1)
        a = Waveform(rng.normal(size=4000) * 0.1, SR)
        b = Waveform(rng.normal(size=4000) * 0.1, SR)
        lhs = lowpass(Waveform(a.samples + b.samples, SR), 2500.0).samples
        rhs = lowpass(a, 2500.0).samples + lowpass(b, 2500.0).samples
        assert np.abs(lhs - rhs).max() <= 1e-9


class TestAddNoise:
    def test_five_db_power_ratio(self, white):
        noise = make_noise("pink", SR, SR, seed=2)
        mixed = add_noise_at_snr(white, noise, 5.0)
        applied = mixed.samples - white.samples
        ratio = white.power() / np.mean(applied ** 2)
        assert 10 * math.log10(ratio) == pytest.approx(5.0, abs=0.1)

    def test_bypass_sentinel_returns_input(self, white):
        out = add_noise_at_snr(white, make_noise("pink", SR, SR, seed=2), SNR_BYPASS)
        np.testing.assert_array_equal(out.samples, white.samples)

    def test_equal_powers_at_zero_db(self):
        assert snr_scale(1.0, 1.0, 0.0) == pytest.approx(1.0, abs=1e-6)

    def test_silent_signal_rejected(self):
        silent = Waveform(np.zeros(1000), SR)
        with pytest.raises(SilentSignalError):
            add_noise_at_snr(silent, make_noise("pink", 1000, SR, seed=0), 10.0)

    def test_short_noise_is_tiled(self, white):
        short = make_noise("pink", 1000, SR, seed=3)
        out = add_noise_at_snr(white, short, 20.0)
        assert len(out.samples) == len(white.samples)

    def test_sample_rate_mismatch_rejected(self, white):
        with pytest.raises(ValueError):
            add_noise_at_snr(white, Waveform(np.ones(100) * 0.1, 8000), 10.0)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-10.0, 40.0), st.sampled_from(["pink", "bursts", "hum"]))
    def test_power_ratio_property(self, snr_db, kind):
        rng = np.random.default_rng(9)
        sig = Waveform(rng.standard_normal(8000) * 0.05, SR)
        mixed = add_noise_at_snr(sig, make_noise(kind, 8000, SR, seed=11), snr_db)
        applied = mixed.samples - sig.samples
        measured = 10 * math.log10(sig.power() / np.mean(applied ** 2))
        assert measured == pytest.approx(snr_db, abs=0.1)


class TestDegrade:
    def test_near_identity_composition(self, white):
        spec = DegradationSpec(cutoff_hz=SR / 2 - 1.0, snr_db=SNR_BYPASS)
        out = degrade(white, spec)
        assert np.abs(out.waveform.samples - white.samples).max() <= 0.01

    def test_fixed_seed_bitwise_reproducible(self, white):
        spec = DegradationSpec(cutoff_hz=2000.0, snr_db=5.0, noise_kind="bursts", rng_seed=13)
        a = degrade(white, spec).waveform.samples
        b = degrade(white, spec).waveform.samples
        assert a.tobytes() == b.tobytes()

    def test_filter_applied_before_noise(self, white):
        # Noise added after the filter keeps full-band energy.
        spec = DegradationSpec(cutoff_hz=2000.0, snr_db=5.0, noise_kind="pink", rng_seed=1)
        out = degrade(white, spec).waveform
        high = band_power_oracle(out.samples, SR, 6000, 8000)
        filtered_only = degrade(white, DegradationSpec(2000.0, SNR_BYPASS)).waveform
        high_clean = band_power_oracle(filtered_only.samples, SR, 6000, 8000)
        assert high > 100 * high_clean

    def test_invalid_cutoff_propagates(self, white):
        with pytest.raises(ValueError):
            degrade(white, DegradationSpec(cutoff_hz=SR, snr_db=5.0))

    def test_peak_clipped_and_counted(self):
        loud = Waveform(np.full(4000, 0.99), SR)
        spec = DegradationSpec(cutoff_hz=7000.0, snr_db=-10.0, noise_kind="hum", rng_seed=5)
        out = degrade(loud, spec)
        assert np.abs(out.waveform.samples).max() <= 1.0
        assert out.clipped_samples > 0
