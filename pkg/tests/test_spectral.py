"""Spectrogram analysis and effective-bandwidth estimation."""

import numpy as np
import pytest

from flowsr.dsp import (
    SilentSignalError,
    Waveform,
    estimate_bandwidth,
    lowpass,
    stft_magnitude,
)

SR = 16000


class TestStft:
    def test_tone_localizes_to_its_bin(self):
        t = np.arange(SR) / SR
        w = Waveform(0.4 * np.sin(2 * np.pi * 1000 * t), SR)
        spec = stft_magnitude(w, fft_len=512, hop=128)
        freqs = spec.bin_freqs
        peak_bins = spec.magnitudes.argmax(axis=1)
        bin_hz = SR / 512
        assert np.all(np.abs(freqs[peak_bins] - 1000.0) <= bin_hz)

    def test_zero_signal_all_zero(self):
        spec = stft_magnitude(Waveform(np.zeros(2048), SR), fft_len=512, hop=128)
        np.testing.assert_array_equal(spec.magnitudes, 0.0)

    def test_parseval_energy_match(self):
        rng = np.random.default_rng(2)
        w = Waveform(rng.normal(size=4096) * 0.2, SR)
        spec = stft_magnitude(w, fft_len=512, hop=512, window="hann")
        win = np.hanning(512)
        # Time-domain oracle: energy of each windowed frame.
        for i in range(spec.n_frames):
            frame = w.samples[i * 512:(i + 1) * 512] * win
            td = np.sum(frame ** 2)
            mags = spec.magnitudes[i]
            weights = np.full(len(mags), 2.0)
            weights[0] = 1.0
            weights[-1] = 1.0  # DC and Nyquist bins are not doubled
            fd = np.sum(weights * mags ** 2) / 512
            assert fd == pytest.approx(td, rel=0.01)

    def test_shapes_and_metadata(self):
        w = Waveform(np.zeros(1000), SR)
        spec = stft_magnitude(w, fft_len=512, hop=128)
        assert spec.n_frames == 1 + (1000 - 512) // 128
        assert spec.n_bins == 257

    def test_short_signal_rejected(self):
        with pytest.raises(ValueError):
            stft_magnitude(Waveform(np.zeros(100), SR), fft_len=512, hop=128)

    def test_bad_fft_len_rejected(self):
        with pytest.raises(ValueError):
            stft_magnitude(Waveform(np.zeros(2048), SR), fft_len=500, hop=128)

    def test_hop_bounds_checked(self):
        with pytest.raises(ValueError):
            stft_magnitude(Waveform(np.zeros(2048), SR), fft_len=512, hop=1024)


@pytest.fixture(scope="module")
def white():
    rng = np.random.default_rng(3)
    return Waveform(rng.standard_normal(SR) * 0.1, SR)


class TestBandwidthEstimation:
    def test_full_band_noise(self, white):
        assert estimate_bandwidth(white) >= 7500.0

    @pytest.mark.parametrize("cutoff", [1000.0, 2000.0, 3000.0, 4000.0, 6000.0])
    def test_constructed_cutoffs_recovered(self, white, cutoff):
        est = estimate_bandwidth(lowpass(white, cutoff))
        assert abs(est - cutoff) <= 250.0

    def test_silent_input_rejected(self):
        with pytest.raises(SilentSignalError):
            estimate_bandwidth(Waveform(np.zeros(4000), SR))

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            estimate_bandwidth(Waveform(np.ones(100) * 0.1, SR))

    def test_returns_grid_values(self, white):
        est = estimate_bandwidth(lowpass(white, 2000.0))
        assert est % 250.0 == 0.0
