"""Dense-tensor core: reverse-mode tape, AdamW, gradient checking, checkpoints."""

from .checkpoint import CheckpointError, load_arrays, save_arrays
from .gradcheck import GradCheckReport, grad_check
from .optim import AdamWState, adamw_step, make_param, uniform_fan_in
from .tensor import (
    ShapeError,
    Tape,
    TapeError,
    Tensor,
    active_tape,
    add,
    backward,
    concat,
    embedding,
    layer_norm,
    matmul,
    mean,
    mse,
    mul,
    reshape,
    silu,
    slice_,
    softmax_lastaxis,
    transpose,
)

__all__ = [
    "AdamWState",
    "CheckpointError",
    "GradCheckReport",
    "ShapeError",
    "Tape",
    "TapeError",
    "Tensor",
    "active_tape",
    "adamw_step",
    "add",
    "backward",
    "concat",
    "embedding",
    "grad_check",
    "layer_norm",
    "load_arrays",
    "make_param",
    "matmul",
    "mean",
    "mse",
    "mul",
    "reshape",
    "save_arrays",
    "silu",
    "slice_",
    "softmax_lastaxis",
    "transpose",
    "uniform_fan_in",
]
