"""Finite-difference verification of tape gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import Tape, Tensor


@dataclass
class GradCheckReport:
    """Worst-case relative error between tape and central-difference grads."""

    max_rel_error: float
    n_coordinates: int
    worst_tensor: str = ""
    worst_index: int = -1
    details: list = field(default_factory=list)

    def ok(self, tolerance: float) -> bool:
        return self.max_rel_error <= tolerance


def grad_check(
    f,
    tensors,
    n_coordinates: int = 100,
    step: float = 1e-5,
    rng: np.random.Generator | None = None,
) -> GradCheckReport:
    """Compare tape gradients of ``f()`` against central differences.

    ``f`` is a zero-argument callable returning a scalar Tensor and closing
    over ``tensors`` (a dict name -> Tensor or an iterable of Tensors). Up
    to ``n_coordinates`` coordinates are sampled across all tensors; each is
    perturbed by +/-``step`` and the relative error between the recorded
    gradient and (f+ - f-)/(2*step) is reported. Always returns a report.
    """
    if isinstance(tensors, dict):
        named = list(tensors.items())
    else:
        named = [(t.name or f"t{i}", t) for i, t in enumerate(tensors)]
    rng = rng or np.random.default_rng(0)

    with Tape() as tape:
        loss = f()
        grads = tape.backward(loss)
    grad_of = {name: grads.get(t, np.zeros_like(t.data)) for name, t in named}

    sizes = np.array([t.size for _, t in named])
    total = int(sizes.sum())
    n = min(n_coordinates, total)
    picks = rng.choice(total, size=n, replace=False)
    bounds = np.cumsum(sizes)

    report = GradCheckReport(max_rel_error=0.0, n_coordinates=n)
    for flat in picks:
        which = int(np.searchsorted(bounds, flat, side="right"))
        name, tensor = named[which]
        idx = int(flat - (bounds[which - 1] if which else 0))
        view = tensor.data.reshape(-1)
        saved = view[idx]
        view[idx] = saved + step
        f_plus = f().item()
        view[idx] = saved - step
        f_minus = f().item()
        view[idx] = saved
        fd = (f_plus - f_minus) / (2.0 * step)
        g = float(grad_of[name].reshape(-1)[idx])
        rel = abs(g - fd) / max(abs(g), abs(fd), 1e-6)
        report.details.append((name, idx, g, fd, rel))
        if rel > report.max_rel_error:
            report.max_rel_error = rel
            report.worst_tensor = name
            report.worst_index = idx
    return report
