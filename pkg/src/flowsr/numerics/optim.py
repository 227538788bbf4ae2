"""AdamW with decoupled weight decay and bias correction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import ShapeError, Tensor


@dataclass
class AdamWState:
    """Optimizer state: first/second moments per parameter plus a step count."""

    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.0
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")


def adamw_step(params: dict, grads: dict, state: AdamWState):
    """One decoupled-weight-decay Adam update, in place.

    ``params`` maps name -> Tensor, ``grads`` maps name -> ndarray and must
    cover every parameter (use zeros for parameters without gradient).
    Returns ``(params, state)``; identical inputs and state produce bitwise
    identical outputs.
    """
    missing = [k for k in params if k not in grads]
    if missing:
        raise KeyError(f"grads missing for parameters: {missing}")
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** t
    c2 = 1.0 - b2 ** t
    for name, p in params.items():
        g = np.asarray(grads[name], dtype=p.dtype)
        if g.shape != p.shape:
            raise ShapeError(f"adamw_step: grad shape {g.shape} != param shape {p.shape} for {name!r}")
        m = state.m.get(name)
        if m is None:
            m = state.m[name] = np.zeros_like(p.data)
        v = state.v.get(name)
        if v is None:
            v = state.v[name] = np.zeros_like(p.data)
        if state.weight_decay:
            p.data -= state.lr * state.weight_decay * p.data
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        mhat = m / c1
        vhat = v / c2
        p.data -= state.lr * (mhat / (np.sqrt(vhat) + state.epsilon))
    return params, state


def uniform_fan_in(rng: np.random.Generator, shape, fan_in: int | None = None, dtype=np.float64) -> np.ndarray:
    """Scaled-uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in))."""
    if fan_in is None:
        fan_in = shape[0] if len(shape) > 1 else max(shape[0], 1)
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def make_param(rng: np.random.Generator, shape, fan_in: int | None = None, dtype=np.float64, name=None) -> Tensor:
    return Tensor(uniform_fan_in(rng, shape, fan_in, dtype), requires_grad=True, name=name)
