"""Signal chain: synthesis, degradation, MDCT codec, spectra, pitch."""

from .degrade import (
    SNR_BYPASS,
    DegradationSpec,
    DegradeResult,
    add_noise_at_snr,
    degrade,
    design_lowpass_taps,
    lowpass,
    snr_scale,
)
from .mdct import LatentSequence, LatentStats, denormalize, mdct_decode, mdct_encode, normalize, sine_window
from .pitch import PitchStats, PitchTrack, pitch_stats, track_pitch
from .spectral import Spectrogram, band_power, estimate_bandwidth, mean_power_spectrum, stft_magnitude
from .synth import (
    CHANNEL_EDGES,
    N_CHANNELS,
    NOISE_KINDS,
    Formant,
    SyntheticUtteranceSpec,
    UtteranceLabels,
    UtteranceSpecError,
    band_limited_noise,
    default_vocab,
    make_noise,
    synth_utterance,
    token_index,
    token_signature,
)
from .waveform import SilentSignalError, Waveform, clip_peak, read_wav, write_wav

__all__ = [
    "CHANNEL_EDGES",
    "DegradationSpec",
    "DegradeResult",
    "Formant",
    "LatentSequence",
    "LatentStats",
    "N_CHANNELS",
    "NOISE_KINDS",
    "PitchStats",
    "PitchTrack",
    "SNR_BYPASS",
    "SilentSignalError",
    "Spectrogram",
    "SyntheticUtteranceSpec",
    "UtteranceLabels",
    "UtteranceSpecError",
    "Waveform",
    "add_noise_at_snr",
    "band_limited_noise",
    "band_power",
    "clip_peak",
    "default_vocab",
    "degrade",
    "denormalize",
    "design_lowpass_taps",
    "estimate_bandwidth",
    "lowpass",
    "make_noise",
    "mdct_decode",
    "mdct_encode",
    "mean_power_spectrum",
    "normalize",
    "pitch_stats",
    "read_wav",
    "sine_window",
    "snr_scale",
    "stft_magnitude",
    "synth_utterance",
    "token_index",
    "token_signature",
    "track_pitch",
    "write_wav",
]
