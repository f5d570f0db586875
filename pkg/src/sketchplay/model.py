"""Generator and critic networks.

Both are temporal residual convolution stacks over per-frame features.
The generator projects the condition per frame and the latent noise once
(added to every frame, so the noise steers the whole sequence), runs the
residual blocks, and emits 28 channels per frame: 22 unbounded position
channels and 6 ball-feature channels squashed into (0, 1). The critic
consumes a condition/play pair (46 channels per frame), mean-pools over
time, and emits one unbounded realism score, which keeps it independent
of the sequence length.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .court import CONDITION_WIDTH, PLAY_TENSOR_WIDTH
from .errors import ConfigError, ShapeError
from .seeding import stream

PAIR_WIDTH = CONDITION_WIDTH + PLAY_TENSOR_WIDTH  # 46


@dataclass(frozen=True)
class ModelConfig:
    channels: int = 64
    residual_blocks: int = 8
    kernel: int = 5
    z_dim: int = 100
    t: int = 50

    def __post_init__(self) -> None:
        if min(self.channels, self.residual_blocks, self.kernel, self.z_dim, self.t) <= 0:
            raise ConfigError("all model dimensions must be positive")
        if self.kernel % 2 == 0:
            raise ConfigError("kernel size must be odd")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "ModelConfig":
        return cls(**{k: int(v) for k, v in obj.items()})


@dataclass
class ParamSet:
    """Named parameter tensors plus the config that shaped them."""

    config: ModelConfig
    tensors: dict[str, Tensor]

    def names(self) -> list[str]:
        return list(self.tensors)

    def values(self) -> list[Tensor]:
        return list(self.tensors.values())

    def copy(self) -> "ParamSet":
        return ParamSet(
            self.config,
            {k: Tensor(v.data.copy(), requires_grad=True) for k, v in self.tensors.items()},
        )


GeneratorParams = ParamSet
CriticParams = ParamSet


def _generator_shapes(cfg: ModelConfig) -> dict[str, tuple[int, ...]]:
    c, k = cfg.channels, cfg.kernel
    shapes: dict[str, tuple[int, ...]] = {
        "cond_proj.w": (CONDITION_WIDTH, c),
        "cond_proj.b": (c,),
        "noise_proj.w": (cfg.z_dim, c),
        "noise_proj.b": (c,),
    }
    for i in range(cfg.residual_blocks):
        shapes[f"block{i}.conv1.w"] = (k * c, c)
        shapes[f"block{i}.conv1.b"] = (c,)
        shapes[f"block{i}.conv2.w"] = (k * c, c)
        shapes[f"block{i}.conv2.b"] = (c,)
    shapes["out.w"] = (k * c, PLAY_TENSOR_WIDTH)
    shapes["out.b"] = (PLAY_TENSOR_WIDTH,)
    return shapes


def _critic_shapes(cfg: ModelConfig) -> dict[str, tuple[int, ...]]:
    c, k = cfg.channels, cfg.kernel
    shapes: dict[str, tuple[int, ...]] = {
        "in_proj.w": (PAIR_WIDTH, c),
        "in_proj.b": (c,),
    }
    for i in range(cfg.residual_blocks):
        shapes[f"block{i}.conv1.w"] = (k * c, c)
        shapes[f"block{i}.conv1.b"] = (c,)
        shapes[f"block{i}.conv2.w"] = (k * c, c)
        shapes[f"block{i}.conv2.b"] = (c,)
    shapes["head.w"] = (c, 1)
    shapes["head.b"] = (1,)
    return shapes


def xavier_bound(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def _init_params(shapes: dict[str, tuple[int, ...]], cfg, rng) -> ParamSet:
    tensors: dict[str, Tensor] = {}
    for name, shape in shapes.items():
        if name.endswith(".b"):
            data = np.zeros(shape)
        else:
            bound = xavier_bound(shape[0], shape[1])
            data = rng.uniform(-bound, bound, size=shape)
        tensors[name] = Tensor(data, requires_grad=True)
    return ParamSet(cfg, tensors)


def xavier_init(cfg: ModelConfig, seed: int) -> tuple[GeneratorParams, CriticParams]:
    """Deterministic Xavier-uniform weights (bound sqrt(6/(fan_in+fan_out))),
    zero biases. Generator tensors are drawn before critic tensors."""
    rng = stream(seed, "init")
    gen = _init_params(_generator_shapes(cfg), cfg, rng)
    critic = _init_params(_critic_shapes(cfg), cfg, rng)
    return gen, critic


def _conv1d(x: Tensor, w: Tensor, b: Tensor, k: int) -> Tensor:
    return ad.add(ad.matmul(ad.unfold(x, k), w), b)


def _residual_stack(h: Tensor, params: ParamSet) -> Tensor:
    # Branches are scaled by 1/sqrt(N) so activation variance stays bounded
    # with depth; otherwise Xavier-initialized outputs leave the court by a
    # couple hundred feet and the critic scores (and the adaptive loss
    # weight) blow up before training starts.
    cfg = params.config
    p = params.tensors
    alpha = 1.0 / np.sqrt(cfg.residual_blocks)
    for i in range(cfg.residual_blocks):
        u = ad.relu(_conv1d(h, p[f"block{i}.conv1.w"], p[f"block{i}.conv1.b"], cfg.kernel))
        h = ad.add(h, ad.scale(_conv1d(u, p[f"block{i}.conv2.w"], p[f"block{i}.conv2.b"], cfg.kernel), alpha))
    return h


def generator_forward(z, y, params: GeneratorParams) -> Tensor:
    """Simulate plays from noise and normalized conditions.

    z: (z_dim,) or (B, z_dim); y: (t, 18) or (B, t, 18), arbitrary t.
    Returns the matching (t, 28) or (B, t, 28) tensor; position channels
    unbounded, feature channels in (0, 1).
    """
    cfg = params.config
    z = ad.as_tensor(z)
    y = ad.as_tensor(y)
    single = y.ndim == 2
    if single:
        y = ad.reshape(y, (1, *y.shape))
        z = ad.reshape(z, (1, *z.shape))
    if y.ndim != 3 or y.shape[2] != CONDITION_WIDTH:
        raise ShapeError(f"condition must be (B, t, {CONDITION_WIDTH}), got {y.shape}")
    if z.ndim != 2 or z.shape[1] != cfg.z_dim:
        raise ShapeError(f"noise must be (B, {cfg.z_dim}), got {z.shape}")
    if z.shape[0] != y.shape[0]:
        raise ShapeError("noise and condition batch sizes differ")
    p = params.tensors
    batch = y.shape[0]

    h = ad.add(ad.matmul(y, p["cond_proj.w"]), p["cond_proj.b"])
    zp = ad.add(ad.matmul(z, p["noise_proj.w"]), p["noise_proj.b"])
    h = ad.add(h, ad.reshape(zp, (batch, 1, cfg.channels)))
    h = _residual_stack(h, params)
    out = _conv1d(h, p["out.w"], p["out.b"], cfg.kernel)
    pos = ad.slice_ax(out, 2, 0, 22)
    feat = ad.sigmoid(ad.slice_ax(out, 2, 22, PLAY_TENSOR_WIDTH))
    full = ad.concat([pos, feat], axis=2)
    return ad.reshape(full, full.shape[1:]) if single else full


def critic_forward(pair, params: CriticParams) -> Tensor:
    """Score condition/play pairs: (t, 46) -> scalar, (B, t, 46) -> (B,)."""
    cfg = params.config
    pair = ad.as_tensor(pair)
    single = pair.ndim == 2
    if single:
        pair = ad.reshape(pair, (1, *pair.shape))
    if pair.ndim != 3 or pair.shape[2] != PAIR_WIDTH:
        raise ShapeError(f"pair must be (B, t, {PAIR_WIDTH}), got {pair.shape}")
    p = params.tensors

    h = ad.add(ad.matmul(pair, p["in_proj.w"]), p["in_proj.b"])
    h = _residual_stack(h, params)
    pooled = ad.mean(h, axis=1)  # (B, C): length-independent
    scores = ad.add(ad.matmul(pooled, p["head.w"]), p["head.b"])
    scores = ad.reshape(scores, (pair.shape[0],))
    return ad.reshape(scores, ()) if single else scores


def draw_noise(rng: np.random.Generator, cfg: ModelConfig, batch: int | None = None) -> np.ndarray:
    """Standard-normal latent noise."""
    if batch is None:
        return rng.standard_normal(cfg.z_dim)
    return rng.standard_normal((batch, cfg.z_dim))
