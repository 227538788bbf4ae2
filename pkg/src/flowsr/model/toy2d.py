"""Unconditional rectified flow on a 2-D Gaussian mixture.

A minimal MLP velocity field trained with the same tape, loss, and
optimizer as the audio model; useful as a fast end-to-end sanity check of
the flow machinery with no audio in the loop.
"""

from __future__ import annotations

import numpy as np

from ..numerics import AdamWState, Tape, Tensor, adamw_step, add, matmul, mse, silu, uniform_fan_in
from .dit import timestep_features
from .flow import euler_integrate

TIME_FEATURES = 16


def mixture_centers(n_modes: int = 8, radius: float = 1.5) -> np.ndarray:
    angles = 2 * np.pi * np.arange(n_modes) / n_modes
    return np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)


def sample_mixture(rng: np.random.Generator, n: int, centers: np.ndarray, sigma: float) -> np.ndarray:
    which = rng.integers(len(centers), size=n)
    return centers[which] + sigma * rng.standard_normal((n, 2))


def build_mlp(rng: np.random.Generator, hidden: int = 96) -> dict:
    in_dim = 2 + TIME_FEATURES
    params = {
        "w1": Tensor(uniform_fan_in(rng, (in_dim, hidden)), requires_grad=True),
        "b1": Tensor(np.zeros(hidden), requires_grad=True),
        "w2": Tensor(uniform_fan_in(rng, (hidden, hidden)), requires_grad=True),
        "b2": Tensor(np.zeros(hidden), requires_grad=True),
        "w3": Tensor(uniform_fan_in(rng, (hidden, 2)), requires_grad=True),
        "b3": Tensor(np.zeros(2), requires_grad=True),
    }
    return params


def mlp_velocity(params: dict, x: np.ndarray, t: float) -> Tensor:
    feats = np.concatenate(
        [x, np.tile(timestep_features(t, TIME_FEATURES), (len(x), 1))], axis=1
    )
    h = silu(add(matmul(Tensor(feats), params["w1"]), params["b1"]))
    h = silu(add(matmul(h, params["w2"]), params["b2"]))
    return add(matmul(h, params["w3"]), params["b3"])


def train_toy_flow(
    steps: int = 3000,
    batch: int = 256,
    lr: float = 2e-3,
    sigma: float = 0.1,
    hidden: int = 96,
    seed: int = 0,
) -> tuple[dict, np.ndarray]:
    """Returns (trained params, mode centers)."""
    centers = mixture_centers()
    rng = np.random.default_rng(seed)
    params = build_mlp(rng, hidden)
    opt = AdamWState(lr=lr)
    for _ in range(steps):
        x1 = sample_mixture(rng, batch, centers, sigma)
        x0 = rng.standard_normal((batch, 2))
        t = float(rng.uniform())
        xt = t * x1 + (1.0 - t) * x0
        with Tape() as tape:
            velocity = mlp_velocity(params, xt, t)
            loss = mse(velocity, Tensor(x1 - x0))
            grad_map = tape.backward(loss)
        grads = {name: grad_map.get(p, np.zeros_like(p.data)) for name, p in params.items()}
        adamw_step(params, grads, opt)
    return params, centers


def sample_toy_flow(params: dict, n: int, steps: int = 32, seed: int = 1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal((n, 2))
    return euler_integrate(lambda x, t: mlp_velocity(params, x, t).data, x0, steps)


def mode_report(samples: np.ndarray, centers: np.ndarray, sigma: float) -> list[dict]:
    """Per-mode capture fraction and sample-mean error within 3 sigma."""
    report = []
    for c in centers:
        near = samples[np.linalg.norm(samples - c, axis=1) <= 3 * sigma]
        fraction = len(near) / len(samples)
        mean_err = np.abs(near.mean(axis=0) - c) if len(near) else np.array([np.inf, np.inf])
        report.append({"center": c, "fraction": fraction, "mean_error": mean_err})
    return report
