"""flowsr: speech bandwidth extension with rectified flow over MDCT latents.

Subpackages:
  numerics     -- tensors, reverse-mode tape, AdamW, checkpoints
  dsp          -- synthetic corpus, degradation, MDCT codec, pitch, spectra
  conditioning -- structured semantic records, caches, prior embeddings
  model        -- transformer velocity network, flow objective, sampler
  evaluation   -- LSD / WER / speaker-similarity metrics and corpus reports
  harness      -- config-driven commands (synth-data, train, restore, ...)
"""

__version__ = "0.1.0"
