"""HTTP service exposing simulation to the sketch-board UI.

The model is loaded once at startup as an immutable snapshot; inference
over it needs no locking, and per-request noise comes from independent
seeded streams.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .autodiff import no_grad
from .checkpoint import load_checkpoint
from .court import CourtSpec, Play, denormalize, normalize, play_to_json, tensor_to_play
from .errors import ConfigError, SketchError, ValidationError
from .model import GeneratorParams, generator_forward
from .seeding import stream
from .sketch import TimingConfig, encode_condition, sketch_from_json, validate_sketch
from .court import SketchPlay

MAX_SAMPLES = 16


@dataclass
class ModelBundle:
    """Read-only inference snapshot."""

    generator: GeneratorParams
    checkpoint_id: str
    train_steps: int

    @classmethod
    def from_checkpoint(cls, path: str) -> "ModelBundle":
        ckpt = load_checkpoint(path)
        name = os.path.splitext(os.path.basename(path))[0]
        return cls(
            generator=ckpt.generator,
            checkpoint_id=f"{name}@{ckpt.step}",
            train_steps=ckpt.step,
        )


@dataclass
class SimulateResponse:
    plays: list[Play]
    condition_t: int
    model: str

    def to_json(self) -> dict:
        return {
            "plays": [play_to_json(p) for p in self.plays],
            "condition_t": self.condition_t,
            "model": self.model,
        }


def simulate(
    sketch: SketchPlay,
    n: int,
    seed: int | None,
    bundle: ModelBundle,
    court: CourtSpec | None = None,
    timing: TimingConfig | None = None,
) -> SimulateResponse:
    """Encode the sketch, draw n latent samples, and decode served plays.

    Generated positions are clamped to the court so every served play
    passes validation regardless of how green the model is.
    """
    court = court or CourtSpec()
    if not 1 <= n <= MAX_SAMPLES:
        raise ConfigError(f"num_samples must be in [1, {MAX_SAMPLES}], got {n}")
    report = validate_sketch(sketch, court)
    if not report.ok:
        raise SketchError(report.violations[0].message)
    condition = encode_condition(sketch, timing, court)
    t = condition.shape[0]
    y_norm = normalize(condition, court)
    cfg = bundle.generator.config
    entropy_rng = np.random.default_rng() if seed is None else None
    plays = []
    for i in range(n):
        if seed is None:
            z = entropy_rng.standard_normal(cfg.z_dim)
        else:
            z = stream(seed, "simulate", i).standard_normal(cfg.z_dim)
        with no_grad():
            out = generator_forward(z, y_norm, bundle.generator).data
        tensor = denormalize(out, court)
        tensor[:, 0:22:2] = np.clip(tensor[:, 0:22:2], 0.0, court.length_x)
        tensor[:, 1:22:2] = np.clip(tensor[:, 1:22:2], 0.0, court.width_y)
        play = tensor_to_play(tensor, court, fps=5.0)
        play.require_valid(court)
        plays.append(play)
    return SimulateResponse(plays=plays, condition_t=t, model=bundle.checkpoint_id)


def create_app(checkpoint_path: str | None = None, static_dir: str | None = None):
    """Build the FastAPI app; the UI build is served from `static_dir`."""
    court = CourtSpec()
    bundle = ModelBundle.from_checkpoint(checkpoint_path) if checkpoint_path else None
    app = FastAPI(title="sketchplay")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/model")
    def model_info():
        info = {
            "court": {
                "length_x": court.length_x,
                "width_y": court.width_y,
                "hoop": [court.hoop.x, court.hoop.y],
            }
        }
        if bundle is None:
            info.update({"config": None, "checkpoint": None, "train_steps": 0})
        else:
            info.update(
                {
                    "config": bundle.generator.config.to_json(),
                    "checkpoint": bundle.checkpoint_id,
                    "train_steps": bundle.train_steps,
                }
            )
        return info

    @app.post("/api/validate")
    async def validate(request: Request):
        body = await request.json()
        try:
            sketch = sketch_from_json(body)
        except SketchError as exc:
            return JSONResponse(
                {"ok": False, "violations": [{"code": "json", "message": str(exc)}]},
                status_code=200,
            )
        return validate_sketch(sketch, court).to_json()

    @app.post("/api/simulate")
    async def simulate_endpoint(request: Request):
        if bundle is None:
            return JSONResponse({"error": "no model loaded"}, status_code=503)
        body = await request.json()
        try:
            sketch = sketch_from_json(body["sketch"])
            n = int(body.get("num_samples", 1))
            seed = body.get("seed")
            response = simulate(
                sketch, n, None if seed is None else int(seed), bundle, court
            )
        except (KeyError, TypeError):
            return JSONResponse({"error": "malformed request"}, status_code=400)
        except ConfigError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except (SketchError, ValidationError) as exc:
            try:
                report = validate_sketch(sketch_from_json(body["sketch"]), court).to_json()
            except Exception:
                report = None
            return JSONResponse(
                {"error": str(exc), "report": report}, status_code=400
            )
        return response.to_json()

    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
