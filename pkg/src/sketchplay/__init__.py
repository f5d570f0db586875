"""Sketch-conditioned adversarial simulation of basketball set plays."""

from .court import (
    CourtSpec,
    Frame,
    PassEvent,
    Phase,
    Play,
    Position,
    ShotEvent,
    SketchPlay,
    denormalize,
    normalize,
    play_from_json,
    play_to_json,
    play_to_tensor,
    tensor_to_play,
)
from .model import ModelConfig, critic_forward, generator_forward, xavier_init
from .sketch import TimingConfig, encode_condition, validate_sketch
from .trainer import TrainConfig, train

__version__ = "0.1.0"

__all__ = [
    "CourtSpec",
    "Frame",
    "ModelConfig",
    "PassEvent",
    "Phase",
    "Play",
    "Position",
    "ShotEvent",
    "SketchPlay",
    "TimingConfig",
    "TrainConfig",
    "critic_forward",
    "denormalize",
    "encode_condition",
    "generator_forward",
    "normalize",
    "play_from_json",
    "play_to_json",
    "play_to_tensor",
    "tensor_to_play",
    "train",
    "validate_sketch",
    "xavier_init",
    "__version__",
]
