"""Velocity model, flow objective, Euler sampler, state, and restoration."""

from .dit import DiTConfig, build_parameters, timestep_features, velocity_forward
from .flow import (
    FlowSample,
    TrainItem,
    TrainingDivergedError,
    dit_forward,
    euler_integrate,
    euler_sample,
    make_flow_sample,
    rf_loss,
    step_rng,
    train_step,
)
from .restore import restore
from .state import AblationFlags, ModelState, load_checkpoint, save_checkpoint

__all__ = [
    "AblationFlags",
    "DiTConfig",
    "FlowSample",
    "ModelState",
    "TrainItem",
    "TrainingDivergedError",
    "build_parameters",
    "dit_forward",
    "euler_integrate",
    "euler_sample",
    "load_checkpoint",
    "make_flow_sample",
    "restore",
    "rf_loss",
    "save_checkpoint",
    "step_rng",
    "timestep_features",
    "train_step",
    "velocity_forward",
]
