"""Linear-path flow samples, the velocity regression loss, Euler sampling,
and the per-step training update."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..conditioning.records import CoTRecord
from ..dsp.pitch import PitchStats
from ..numerics import Tape, Tensor, adamw_step, mse, mul
from .dit import velocity_forward


class TrainingDivergedError(RuntimeError):
    def __init__(self, step: int, seed: int, item_ids):
        self.step = step
        self.seed = seed
        self.item_ids = list(item_ids)
        super().__init__(
            f"non-finite loss at step {step} (seed {seed}, items {self.item_ids})"
        )


@dataclass
class FlowSample:
    """One point on the straight path from noise to data."""

    x0: np.ndarray
    x1: np.ndarray
    t: float
    xt: np.ndarray
    target_velocity: np.ndarray

    @classmethod
    def at(cls, x1: np.ndarray, x0: np.ndarray, t: float) -> "FlowSample":
        """Exact evaluation of the path definition at time t."""
        xt = t * x1 + (1.0 - t) * x0
        return cls(x0=x0, x1=x1, t=t, xt=xt, target_velocity=x1 - x0)


def make_flow_sample(x1: np.ndarray, rng: np.random.Generator) -> FlowSample:
    """Fresh source noise and a uniform time on [0, 1]."""
    x1 = np.asarray(x1)
    x0 = rng.standard_normal(x1.shape).astype(x1.dtype, copy=False)
    return FlowSample.at(x1, x0, float(rng.uniform()))


def rf_loss(predicted: Tensor, target) -> Tensor:
    """Mean squared error over every entry of the velocity field."""
    if not isinstance(target, Tensor):
        target = Tensor(np.asarray(target, dtype=predicted.dtype))
    return mse(predicted, target)


def euler_integrate(velocity_fn, x0: np.ndarray, steps: int) -> np.ndarray:
    """x <- x + (1/steps) * v(x, i/steps) for i = 0..steps-1."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    x = np.array(x0, copy=True)
    dt = 1.0 / steps
    for i in range(steps):
        x = x + dt * np.asarray(velocity_fn(x, i / steps))
    return x


def dit_forward(state, xt, t, lr_latent, bundle) -> Tensor:
    return velocity_forward(state.params, state.config, xt, t, lr_latent, bundle)


def euler_sample(state, x0: np.ndarray, lr_latent: np.ndarray, bundle, steps: int = 32) -> np.ndarray:
    def v(x, t):
        return velocity_forward(state.params, state.config, x, t, lr_latent, bundle).data

    return euler_integrate(v, x0, steps)


@dataclass
class TrainItem:
    """One utterance's training inputs (latents normalized)."""

    x1: np.ndarray
    lr_latent: np.ndarray
    record: CoTRecord
    cutoff_hz: float
    pitch: PitchStats
    item_id: str = ""


def step_rng(seed: int, step: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(step,)))


def train_step(state, batch: list[TrainItem]):
    """One forward/backward/AdamW update on the mean loss over fresh flow
    samples (new x0 and t per item per step).

    Conditioning bundles are built inside the tape so gradients reach the
    semantic table and prior projections.
    """
    if not batch:
        raise ValueError("train_step needs a non-empty batch")
    rng = step_rng(state.seed, state.step)
    with Tape() as tape:
        total = None
        for item in batch:
            sample = make_flow_sample(item.x1, rng)
            bundle = state.build_bundle(item.record, item.cutoff_hz, item.pitch)
            velocity = velocity_forward(
                state.params, state.config, sample.xt, sample.t, item.lr_latent, bundle
            )
            loss_i = rf_loss(velocity, sample.target_velocity)
            total = loss_i if total is None else total + loss_i
        loss = mul(total, 1.0 / len(batch))
        if not np.isfinite(loss.data):
            raise TrainingDivergedError(state.step, state.seed, [i.item_id for i in batch])
        grad_map = tape.backward(loss)

    grads = {
        name: grad_map.get(p, np.zeros_like(p.data)) for name, p in state.params.items()
    }
    adamw_step(state.params, grads, state.opt)
    state.step += 1
    return state, float(loss.data)
