"""Self-describing checkpoint container.

Layout: one line of JSON (sorted keys) describing the format version,
model config, counters, seed, and the ordered tensor table; then the raw
little-endian float64 blobs in table order. No timestamps or other
volatile bytes, so identical training runs write identical files.
Writes are atomic (temp file + rename).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .autodiff import Tensor
from .errors import ConfigError
from .model import CriticParams, GeneratorParams, ModelConfig, ParamSet

FORMAT = "sketchplay-checkpoint"
VERSION = 1


@dataclass
class Checkpoint:
    model_config: ModelConfig
    generator: GeneratorParams
    critic: CriticParams
    step: int = 0
    epoch: int = 0
    seed: int = 0
    extras: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def save_checkpoint(path: str, ckpt: Checkpoint) -> None:
    names: list[str] = []
    blobs: list[np.ndarray] = []
    for prefix, params in (("gen", ckpt.generator), ("critic", ckpt.critic)):
        for name, tensor in params.tensors.items():
            names.append(f"{prefix}.{name}")
            blobs.append(tensor.data)
    for name in sorted(ckpt.extras):
        names.append(f"extra.{name}")
        blobs.append(np.asarray(ckpt.extras[name], dtype=np.float64))

    header = {
        "format": FORMAT,
        "version": VERSION,
        "model_config": ckpt.model_config.to_json(),
        "step": int(ckpt.step),
        "epoch": int(ckpt.epoch),
        "seed": int(ckpt.seed),
        "meta": ckpt.meta,
        "tensors": [
            {"name": n, "shape": list(b.shape)} for n, b in zip(names, blobs)
        ],
    }
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for blob in blobs:
            fh.write(np.ascontiguousarray(blob, dtype="<f8").tobytes())
    os.replace(tmp, path)


def load_checkpoint(path: str) -> Checkpoint:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not a checkpoint file") from exc
        if header.get("format") != FORMAT:
            raise ConfigError(f"{path}: unknown checkpoint format")
        if header.get("version") != VERSION:
            raise ConfigError(f"{path}: unsupported checkpoint version {header.get('version')}")
        cfg = ModelConfig.from_json(header["model_config"])
        gen_tensors: dict[str, Tensor] = {}
        critic_tensors: dict[str, Tensor] = {}
        extras: dict[str, np.ndarray] = {}
        for entry in header["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise ConfigError(f"{path}: truncated tensor {entry['name']}")
            arr = np.frombuffer(raw, dtype="<f8").reshape(shape).astype(np.float64)
            name = entry["name"]
            if name.startswith("gen."):
                gen_tensors[name[4:]] = Tensor(arr, requires_grad=True)
            elif name.startswith("critic."):
                critic_tensors[name[7:]] = Tensor(arr, requires_grad=True)
            elif name.startswith("extra."):
                extras[name[6:]] = arr
            else:
                raise ConfigError(f"{path}: unknown tensor namespace {name}")
    return Checkpoint(
        model_config=cfg,
        generator=ParamSet(cfg, gen_tensors),
        critic=ParamSet(cfg, critic_tensors),
        step=int(header["step"]),
        epoch=int(header["epoch"]),
        seed=int(header["seed"]),
        extras=extras,
        meta=header.get("meta", {}),
    )
