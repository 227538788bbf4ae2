"""Dense tensors and the reverse-mode tape that differentiates them.

The operation set is closed on purpose: add, mul, matmul, transpose,
reshape, concat, slice, softmax, layer_norm, silu, embedding, mean, mse.
Broadcasting is restricted to leading-batch broadcast: two operands are
compatible when one shape is a trailing suffix of the other. Anything
fancier raises ShapeError instead of guessing.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

FLOAT_DTYPES = (np.float32, np.float64)


class ShapeError(ValueError):
    """Raised when operand shapes are incompatible."""


class TapeError(RuntimeError):
    """Raised on invalid backward requests (non-scalar loss, empty tape)."""


def _as_array(data, dtype=None) -> np.ndarray:
    arr = np.asarray(data)
    if dtype is not None:
        return arr.astype(dtype, copy=False)
    if arr.dtype not in FLOAT_DTYPES:
        return arr.astype(np.float64)
    return arr


class Tensor:
    """A dense n-dimensional real array, optionally tracked for gradients.

    ``leaf`` distinguishes user-created tensors (parameters, inputs) from
    op outputs; only leaves get a materialized ``.grad``.
    """

    __slots__ = ("data", "requires_grad", "grad", "name", "leaf")

    def __init__(self, data, requires_grad: bool = False, name: Optional[str] = None, dtype=None):
        self.data = _as_array(data, dtype)
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self.leaf = True

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def zero_grad(self) -> None:
        self.grad = None

    def assert_finite(self) -> "Tensor":
        if not np.all(np.isfinite(self.data)):
            raise FloatingPointError(f"non-finite values in tensor {self.name or self.shape}")
        return self

    def __repr__(self) -> str:
        tag = f" name={self.name!r}" if self.name else ""
        grad = " grad" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}, dtype={self.data.dtype}{grad}{tag})"

    # Arithmetic sugar stays inside the closed op set: a - b is
    # add(a, mul(b, -1)).
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __sub__(self, other):
        if not isinstance(other, Tensor):
            return add(self, -float(other))
        return add(self, mul(other, -1.0))

    def __matmul__(self, other):
        return matmul(self, other)


@dataclass
class TapeEntry:
    """One recorded operation: inputs, output, and its backward rule."""

    op: str
    inputs: tuple
    output: Tensor
    backward: Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


_STACKS = threading.local()


def _stack() -> list:
    if not hasattr(_STACKS, "tapes"):
        _STACKS.tapes = []
    return _STACKS.tapes


def active_tape() -> Optional["Tape"]:
    stack = _stack()
    return stack[-1] if stack else None


class Tape:
    """Ordered record of operations; one tape per worker, cleared per step."""

    def __init__(self):
        self.entries: list[TapeEntry] = []

    def __enter__(self) -> "Tape":
        _stack().append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _stack().remove(self)

    def clear(self) -> None:
        self.entries.clear()

    def backward(self, loss: Tensor) -> dict:
        """Reverse sweep from a scalar loss.

        Returns a map Tensor -> gradient array for every requires_grad
        tensor reached; also accumulates additively into each tensor's
        ``.grad``. Each recorded operation is visited exactly once.
        """
        if loss.data.size != 1:
            raise TapeError(f"backward requires a scalar loss, got shape {loss.shape}")
        if not self.entries:
            raise TapeError("backward on an empty tape")

        grads: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
        by_id: dict[int, Tensor] = {id(loss): loss}
        for entry in reversed(self.entries):
            gout = grads.get(id(entry.output))
            if gout is None:
                continue
            for tensor, gin in zip(entry.inputs, entry.backward(gout)):
                if gin is None or not isinstance(tensor, Tensor):
                    continue
                tid = id(tensor)
                by_id[tid] = tensor
                if tid in grads:
                    grads[tid] += gin
                else:
                    # Storing a view of gout is safe (its base is never read
                    # again); only an alias of gout itself must be copied so
                    # a later += cannot double-count.
                    grads[tid] = gin.copy() if gin is gout else gin

        result: dict[Tensor, np.ndarray] = {}
        for tid, tensor in by_id.items():
            if tensor.requires_grad and tensor.leaf and tid in grads:
                if tensor.grad is None:
                    tensor.grad = np.zeros_like(tensor.data)
                tensor.grad += grads[tid]
                result[tensor] = grads[tid]
        return result


def backward(loss: Tensor) -> dict:
    """Differentiate the active tape's scalar loss (module-level sugar)."""
    tape = active_tape()
    if tape is None:
        raise TapeError("no active tape")
    return tape.backward(loss)


# ---------------------------------------------------------------------------
# op plumbing


def _record(op: str, inputs: tuple, out_data: np.ndarray, bw) -> Tensor:
    requires = any(isinstance(t, Tensor) and t.requires_grad for t in inputs)
    out = Tensor(out_data, requires_grad=requires)
    out.leaf = False
    tape = active_tape()
    if tape is not None and requires:
        tape.entries.append(TapeEntry(op, inputs, out, bw))
    return out


def _suffix_compatible(sa: tuple, sb: tuple) -> bool:
    k = min(len(sa), len(sb))
    return k == 0 or sa[len(sa) - k:] == sb[len(sb) - k:]


def _reduce_to(grad: np.ndarray, shape: tuple) -> np.ndarray:
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    return grad


def _coerce_pair(a, b):
    if not isinstance(a, Tensor):
        raise TypeError("first operand must be a Tensor")
    if isinstance(b, Tensor):
        return a, b, b.data
    return a, b, np.asarray(b, dtype=a.dtype)


# ---------------------------------------------------------------------------
# the closed operation set


def _needs(t) -> bool:
    return isinstance(t, Tensor) and t.requires_grad


def add(a: Tensor, b) -> Tensor:
    a, b, bdata = _coerce_pair(a, b)
    if not _suffix_compatible(a.shape, bdata.shape):
        raise ShapeError(f"add: incompatible shapes {a.shape} and {bdata.shape}")
    out = a.data + bdata
    na, nb = _needs(a), _needs(b)

    def bw(g):
        return (
            _reduce_to(g, a.shape) if na else None,
            _reduce_to(g, bdata.shape) if nb else None,
        )

    return _record("add", (a, b), out, bw)


def mul(a: Tensor, b) -> Tensor:
    a, b, bdata = _coerce_pair(a, b)
    if not _suffix_compatible(a.shape, bdata.shape):
        raise ShapeError(f"mul: incompatible shapes {a.shape} and {bdata.shape}")
    out = a.data * bdata
    na, nb = _needs(a), _needs(b)

    def bw(g):
        ga = _reduce_to(g * bdata, a.shape) if na else None
        gb = _reduce_to(g * a.data, bdata.shape) if nb else None
        return (ga, gb)

    return _record("mul", (a, b), out, bw)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim < 2 or b.data.ndim < 2:
        raise ShapeError(f"matmul: operands must be >=2-D, got {a.shape} and {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: inner dimensions differ, {a.shape} vs {b.shape}")
    if b.data.ndim > 2 and a.shape[:-2] != b.shape[:-2]:
        raise ShapeError(f"matmul: leading batch dims differ, {a.shape} vs {b.shape}")
    out = np.matmul(a.data, b.data)
    na, nb = _needs(a), _needs(b)

    def bw(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2)) if na else None
        if not nb:
            gb = None
        elif b.data.ndim == 2 and a.data.ndim > 2:
            k = a.shape[-1]
            gb = a.data.reshape(-1, k).T @ g.reshape(-1, g.shape[-1])
        else:
            gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return (ga, gb)

    return _record("matmul", (a, b), out, bw)


def transpose(a: Tensor, axes: Optional[tuple] = None) -> Tensor:
    if axes is None:
        if a.data.ndim < 2:
            raise ShapeError(f"transpose: default axes need >=2-D, got shape {a.shape}")
        axes = tuple(range(a.data.ndim - 2)) + (a.data.ndim - 1, a.data.ndim - 2)
    inverse = tuple(np.argsort(axes))
    out = a.data.transpose(axes)

    def bw(g):
        return (g.transpose(inverse),)

    return _record("transpose", (a,), out, bw)


def reshape(a: Tensor, shape) -> Tensor:
    out = a.data.reshape(shape)

    def bw(g):
        return (g.reshape(a.shape),)

    return _record("reshape", (a,), out, bw)


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat: empty input list")
    out = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def bw(g):
        moved = np.moveaxis(g, axis, 0)
        return tuple(
            np.moveaxis(moved[offsets[i]:offsets[i + 1]], 0, axis) for i in range(len(sizes))
        )

    return _record("concat", tuple(tensors), out, bw)


def slice_(a: Tensor, index) -> Tensor:
    out = a.data[index]

    def bw(g):
        ga = np.zeros_like(a.data)
        ga[index] = g
        return (ga,)

    return _record("slice", (a,), out, bw)


def softmax_lastaxis(a: Tensor) -> Tensor:
    if a.data.ndim == 0 or a.shape[-1] < 1:
        raise ShapeError(f"softmax: last axis must be non-empty, got shape {a.shape}")
    shifted = a.data - a.data.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=-1, keepdims=True)

    def bw(g):
        dot = (g * out).sum(axis=-1, keepdims=True)
        return (out * (g - dot),)

    return _record("softmax", (a,), out, bw)


def layer_norm(a: Tensor, gain: Tensor, bias: Tensor, epsilon: float = 1e-8) -> Tensor:
    if a.shape[-1] < 2:
        raise ShapeError(f"layer_norm: normalization axis must have length >= 2, got {a.shape}")
    mu = a.data.mean(axis=-1, keepdims=True)
    var = a.data.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + epsilon)
    xhat = (a.data - mu) * inv
    out = xhat * gain.data + bias.data
    na = _needs(a)

    def bw(g):
        ggain = _reduce_to(g * xhat, gain.shape)
        gbias = _reduce_to(g, bias.shape)
        if na:
            d = g * gain.data
            ga = inv * (d - d.mean(axis=-1, keepdims=True) - xhat * (d * xhat).mean(axis=-1, keepdims=True))
        else:
            ga = None
        return (ga, ggain, gbias)

    return _record("layer_norm", (a, gain, bias), out, bw)


def silu(a: Tensor) -> Tensor:
    s = 1.0 / (1.0 + np.exp(-a.data))
    out = a.data * s

    def bw(g):
        return (g * (s * (1.0 + a.data * (1.0 - s))),)

    return _record("silu", (a,), out, bw)


def embedding(table: Tensor, ids) -> Tensor:
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ShapeError(f"embedding: ids out of range for table of {table.shape[0]} rows")
    out = table.data[ids]

    def bw(g):
        gt = np.zeros_like(table.data)
        np.add.at(gt, ids, g)
        return (gt,)

    return _record("embedding", (table,), out, bw)


def mean(a: Tensor) -> Tensor:
    out = np.asarray(a.data.mean(), dtype=a.dtype)

    def bw(g):
        return (np.full(a.shape, g / a.data.size, dtype=a.dtype),)

    return _record("mean", (a,), out, bw)


def mse(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeError(f"mse: shapes differ, {a.shape} vs {b.shape}")
    diff = a.data - b.data
    out = np.asarray((diff * diff).mean(), dtype=a.dtype)

    def bw(g):
        scale = 2.0 * g / diff.size
        return (scale * diff, -scale * diff)

    return _record("mse", (a, b), out, bw)
