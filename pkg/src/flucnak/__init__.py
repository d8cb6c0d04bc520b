"""Effective capacity and Laplacian-noise SER over fluctuating Nakagami-m fading."""

__version__ = "0.1.0"

from .channel import ChannelParams, EnvelopeParams, validate_params
from .effective_capacity import DelayConstraint, delay_constraint
from .errors import (
    AccuracyError,
    AsymptoteUndefinedError,
    BelowMinimumError,
    ContractError,
    FlucnakError,
    MomentDivergenceError,
    ParameterError,
)
from .ser import LaplacianNoise, Modulation

__all__ = [
    "AccuracyError",
    "AsymptoteUndefinedError",
    "BelowMinimumError",
    "ChannelParams",
    "ContractError",
    "DelayConstraint",
    "EnvelopeParams",
    "FlucnakError",
    "LaplacianNoise",
    "Modulation",
    "MomentDivergenceError",
    "ParameterError",
    "delay_constraint",
    "validate_params",
]
