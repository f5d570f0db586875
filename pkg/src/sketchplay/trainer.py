"""Adversarial training: three-phase schedule, Adam, checkpointing, logging.

The critic is pre-trained on every batch for the first epochs while the
generator steps once per epoch; afterwards the critic takes a fixed
number of fresh batches per generator step, with a periodic boost epoch
that doubles the ratio. Every random draw is counter-keyed, so a run is
bitwise reproducible for a fixed seed and thread count, and resuming
from a checkpoint continues the exact step sequence.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, NamedTuple

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor, grad, no_grad
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .court import CourtSpec, normalize, play_to_tensor
from .errors import ConfigError
from .losses import (
    LossReport,
    acceleration_loss,
    adaptive_weight,
    ball_pass_loss,
    composite_generator_loss,
    critic_loss,
    defender_loss,
    dribbler_loss,
    generator_adv_loss,
    gradient_penalty,
)
from .model import ModelConfig, ParamSet, critic_forward, generator_forward, xavier_init
from .pipeline import DEFAULT_RDP_EPSILON_FT, derive_events, sketchify
from .seeding import stream

DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    batch_size: int = 128
    gp_lambda: float = 10.0
    t: int = 50
    pretrain_epochs: int = 10
    critic_ratio: int = 5
    boost_period_epochs: int = 20
    boost_ratio: int = 10
    adam_beta1: float = 0.5
    adam_beta2: float = 0.9
    epsilon_adam: float = 1e-8
    max_epochs: int = 50
    eval_every: int = 5
    seed: int = 7
    early_stop_patience: int = 5

    def __post_init__(self) -> None:
        numeric = {f.name: getattr(self, f.name) for f in fields(self)}
        for name, value in numeric.items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.critic_ratio < 1 or self.boost_ratio < 1:
            raise ConfigError("critic/boost ratios must be >= 1")


_TRAIN_KEYS = {f.name for f in fields(TrainConfig)}
_MODEL_KEYS = {f.name for f in fields(ModelConfig)}


def parse_config_file(path: str) -> tuple[TrainConfig, ModelConfig]:
    """Flat `key = value` text; keys are TrainConfig and ModelConfig fields."""
    train_kw: dict = {}
    model_kw: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, value = parts
            key, value = key.strip(), value.strip()
            if key == "t":  # shared: the sequence length is one setting
                train_kw[key] = int(value)
                model_kw[key] = int(value)
            elif key in _TRAIN_KEYS:
                train_kw[key] = type(getattr(TrainConfig, key))(value)
            elif key in _MODEL_KEYS:
                model_kw[key] = int(value)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return TrainConfig(**train_kw), ModelConfig(**model_kw)


def write_config_file(path: str, cfg: TrainConfig, model_cfg: ModelConfig) -> None:
    with open(path, "w") as fh:
        for name, value in asdict(cfg).items():
            if name != "t":
                fh.write(f"{name} = {value}\n")
        for name, value in model_cfg.to_json().items():
            fh.write(f"{name} = {value}\n")


# Schedule ----------------------------------------------------------------------


class EpochPlan(NamedTuple):
    """Critic/generator cadence for one epoch.

    critic_iters_per_gen is None in pretraining (critic takes every
    batch); gen_iters_per_epoch is None outside it (as many generator
    steps as complete critic groups fit in the epoch).
    """

    phase: str
    critic_iters_per_gen: int | None
    gen_iters_per_epoch: int | None


def schedule_plan(epoch: int, cfg: TrainConfig) -> EpochPlan:
    if epoch < 0:
        raise ConfigError("epoch must be >= 0")
    if epoch < cfg.pretrain_epochs:
        return EpochPlan("pretrain", None, 1)
    if (epoch - cfg.pretrain_epochs) % cfg.boost_period_epochs == 0:
        return EpochPlan("boost", cfg.boost_ratio, None)
    return EpochPlan("main", cfg.critic_ratio, None)


def epoch_actions(plan: EpochPlan, n_batches: int) -> list[tuple[str, int]]:
    """Ordered (kind, batch index) actions realizing the plan for an epoch.

    Outside pretraining the generator steps once after each complete group
    of critic batches; a trailing incomplete group still feeds the critic
    but triggers no generator step, so counters over complete groups show
    the exact ratio.
    """
    if plan.phase == "pretrain":
        actions = [("critic", i) for i in range(n_batches)]
        actions.append(("generator", n_batches - 1))
        return actions
    ratio = plan.critic_iters_per_gen or 1
    actions = []
    start = 0
    while start < n_batches:
        group = list(range(start, min(start + ratio, n_batches)))
        actions.extend(("critic", i) for i in group)
        if len(group) == ratio:
            actions.append(("generator", group[-1]))
        start += ratio
    return actions


# Adam -----------------------------------------------------------------------------


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = 0
    skipped: int = 0

    @classmethod
    def for_params(cls, params: ParamSet) -> "AdamState":
        return cls(
            m={k: np.zeros_like(v.data) for k, v in params.tensors.items()},
            v={k: np.zeros_like(v.data) for k, v in params.tensors.items()},
        )


def adam_step(
    params: ParamSet, grads: dict[str, np.ndarray], state: AdamState, cfg: TrainConfig
) -> tuple[ParamSet, AdamState]:
    """Bias-corrected Adam update; a non-finite gradient skips the step."""
    for g in grads.values():
        if not np.isfinite(g).all():
            state.skipped += 1
            return params, state
    state.step += 1
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    c1 = 1.0 - b1**state.step
    c2 = 1.0 - b2**state.step
    lr = cfg.learning_rate
    for name, g in grads.items():
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        params.tensors[name].data -= lr * (m / c1) / (np.sqrt(v / c2) + cfg.epsilon_adam)
    return params, state


def early_stop(validation_history: list[float], patience: int = 5) -> bool:
    """True when the last `patience` gap values are strictly increasing."""
    if len(validation_history) < patience:
        return False
    tail = validation_history[-patience:]
    return all(a < b for a, b in zip(tail, tail[1:]))


# Logging ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TrainLogRecord:
    step: int
    epoch: int
    phase: str
    kind: str
    wasserstein: float
    penalty: float | None = None
    losses: LossReport | None = None
    wall_s: float = 0.0

    def to_jsonl(self) -> str:
        # Wall time stays out of the file so identical runs write identical logs.
        rec: dict = {
            "step": self.step,
            "epoch": self.epoch,
            "phase": self.phase,
            "kind": self.kind,
            "wasserstein": self.wasserstein,
        }
        if self.penalty is not None:
            rec["penalty"] = self.penalty
        if self.losses is not None:
            rec["losses"] = self.losses.to_json()
        return json.dumps(rec, sort_keys=True)


@dataclass
class TrainLog:
    records: list[TrainLogRecord] = field(default_factory=list)

    def append(self, rec: TrainLogRecord) -> None:
        if self.records and rec.step <= self.records[-1].step:
            raise ValueError("log steps must be strictly increasing")
        self.records.append(rec)


@dataclass
class TrainResult:
    generator: ParamSet
    critic: ParamSet
    log: TrainLog
    checkpoints: list[str]
    counters: dict[str, int]
    gap_history: list[float]
    stopped_early: bool = False
    diverged: bool = False


# Dataset preparation ------------------------------------------------------------------


def prepare_pairs(
    plays,
    court: CourtSpec | None = None,
    epsilon: float = DEFAULT_RDP_EPSILON_FT,
) -> tuple[np.ndarray, np.ndarray]:
    """(conditions, real tensors), both normalized, from ordered plays."""
    court = court or CourtSpec()
    ys, xs = [], []
    for play in plays:
        events = derive_events(play)
        _, cond = sketchify(play, events, epsilon, court)
        ys.append(normalize(cond, court))
        xs.append(normalize(play_to_tensor(play, court), court))
    return np.stack(ys), np.stack(xs)


# Training loop ---------------------------------------------------------------------------


def train(
    plays,
    cfg: TrainConfig,
    model_cfg: ModelConfig,
    out_dir: str | None = None,
    resume_from: str | None = None,
    court: CourtSpec | None = None,
    progress: Callable[[str], None] | None = None,
) -> TrainResult:
    """Run the full adversarial loop over prepared plays.

    Plays must share length cfg.t and be in canonical player order.
    Checkpoints (with Adam state) are written every `eval_every` epochs
    and at the end; the JSON-Lines log omits wall time so reruns with the
    same seed are byte-identical.
    """
    if not plays:
        raise ConfigError("empty dataset")
    if any(p.t != cfg.t for p in plays):
        raise ConfigError(f"all plays must have t == {cfg.t}")
    court = court or CourtSpec()
    fps = plays[0].fps
    seed = cfg.seed

    Y, X = prepare_pairs(plays, court)
    n = len(plays)
    perm = stream(seed, "split").permutation(n)
    n_hold = max(1, n // 10)
    hold_idx = perm[:n_hold]
    train_idx = perm[n_hold:]
    if len(train_idx) < cfg.batch_size:
        raise ConfigError(
            f"training split ({len(train_idx)}) smaller than batch size {cfg.batch_size}"
        )
    n_batches = len(train_idx) // cfg.batch_size

    if resume_from is not None:
        ckpt = load_checkpoint(resume_from)
        gen_params, critic_params = ckpt.generator, ckpt.critic
        step = ckpt.step
        start_epoch = ckpt.epoch
        counters = dict(ckpt.meta.get("counters", {}))
        gap_history = list(ckpt.meta.get("gap_history", []))
        gen_adam = AdamState.for_params(gen_params)
        critic_adam = AdamState.for_params(critic_params)
        for name in gen_params.tensors:
            gen_adam.m[name] = ckpt.extras[f"adam.gen.m.{name}"].copy()
            gen_adam.v[name] = ckpt.extras[f"adam.gen.v.{name}"].copy()
        for name in critic_params.tensors:
            critic_adam.m[name] = ckpt.extras[f"adam.critic.m.{name}"].copy()
            critic_adam.v[name] = ckpt.extras[f"adam.critic.v.{name}"].copy()
        gen_adam.step = counters.get("gen_adam_steps", 0)
        critic_adam.step = counters.get("critic_adam_steps", 0)
    else:
        gen_params, critic_params = xavier_init(model_cfg, seed)
        gen_adam = AdamState.for_params(gen_params)
        critic_adam = AdamState.for_params(critic_params)
        step = 0
        start_epoch = 0
        counters = {"critic_steps": 0, "gen_steps": 0}
        gap_history = []

    log = TrainLog()
    log_fh = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        mode = "a" if resume_from is not None else "w"
        log_fh = open(os.path.join(out_dir, "train_log.jsonl"), mode)
    checkpoints: list[str] = []
    # The heuristic terms are trained in the network's normalized units:
    # in feet their gradients outweigh the critic's by three orders of
    # magnitude and collapse the ball feature; see the loss-report note.
    hoop = (court.hoop.x / court.length_x, court.hoop.y / court.width_y)

    gen_names = gen_params.names()
    critic_names = critic_params.names()
    diverged = False
    stopped_early = False

    def emit(rec: TrainLogRecord) -> None:
        log.append(rec)
        if log_fh is not None:
            log_fh.write(rec.to_jsonl() + "\n")

    def critic_batch_step(epoch: int, phase: str, bidx: np.ndarray) -> float:
        nonlocal step
        t0 = time.perf_counter()
        yb, xb = Y[bidx], X[bidx]
        z = stream(seed, "noise", step).standard_normal((len(bidx), model_cfg.z_dim))
        with no_grad():
            g = generator_forward(z, yb, gen_params).data
        real_scores = critic_forward(Tensor(np.concatenate([yb, xb], axis=2)), critic_params)
        fake_scores = critic_forward(Tensor(np.concatenate([yb, g], axis=2)), critic_params)
        eps = stream(seed, "gp", step).uniform(0.0, 1.0, len(bidx))
        penalty = gradient_penalty(critic_params, yb, xb, g, cfg.gp_lambda, eps)
        loss = critic_loss(real_scores, fake_scores, penalty)
        grads = dict(zip(critic_names, (t.data for t in grad(loss, critic_params.values()))))
        adam_step(critic_params, grads, critic_adam, cfg)
        w_est = float(np.mean(real_scores.data) - np.mean(fake_scores.data))
        div_measure = abs(loss.item()) if np.isfinite(loss.item()) else np.inf
        emit(
            TrainLogRecord(
                step=step,
                epoch=epoch,
                phase=phase,
                kind="critic",
                wasserstein=w_est,
                penalty=penalty.item(),
                wall_s=time.perf_counter() - t0,
            )
        )
        step += 1
        counters["critic_steps"] = counters.get("critic_steps", 0) + 1
        return div_measure

    def generator_batch_step(epoch: int, phase: str, bidx: np.ndarray) -> float:
        nonlocal step
        t0 = time.perf_counter()
        yb = Y[bidx]
        xb = X[bidx]
        z = stream(seed, "noise", step).standard_normal((len(bidx), model_cfg.z_dim))
        g = generator_forward(z, yb, gen_params)
        fake_scores = critic_forward(ad.concat([Tensor(yb), g], axis=2), critic_params)
        adv = generator_adv_loss(fake_scores)
        ld = dribbler_loss(g)
        lb = ball_pass_loss(g)
        lw = defender_loss(xb, g, hoop)
        la = acceleration_loss(xb, g, fps=fps)
        total = composite_generator_loss(adv, ld, lb, lw, la, fake_scores)
        grads = dict(zip(gen_names, (t.data for t in grad(total, gen_params.values()))))
        adam_step(gen_params, grads, gen_adam, cfg)
        report = LossReport(
            adversarial=adv.item(),
            dribbler=ld.item(),
            defender=lw.item(),
            ball_pass=lb.item(),
            acceleration=la.item(),
            composite=total.item(),
            w=adaptive_weight(fake_scores),
        )
        emit(
            TrainLogRecord(
                step=step,
                epoch=epoch,
                phase=phase,
                kind="generator",
                wasserstein=float(np.mean(fake_scores.data)),
                losses=report,
                wall_s=time.perf_counter() - t0,
            )
        )
        step += 1
        counters["gen_steps"] = counters.get("gen_steps", 0) + 1
        # Divergence is judged on the adversarial part; the heuristic sums
        # are legitimately huge while early positions are far off court.
        if not np.isfinite(total.item()):
            return np.inf
        return abs(adv.item())

    def critic_gap() -> float:
        k = int(min(len(hold_idx), len(train_idx), 64))
        with no_grad():
            s_train = critic_forward(
                Tensor(np.concatenate([Y[train_idx[:k]], X[train_idx[:k]]], axis=2)),
                critic_params,
            ).data
            s_hold = critic_forward(
                Tensor(np.concatenate([Y[hold_idx[:k]], X[hold_idx[:k]]], axis=2)),
                critic_params,
            ).data
        return float(np.mean(s_train) - np.mean(s_hold))

    def write_checkpoint(epoch_next: int, tag: str) -> str:
        extras: dict[str, np.ndarray] = {}
        for name in gen_names:
            extras[f"adam.gen.m.{name}"] = gen_adam.m[name]
            extras[f"adam.gen.v.{name}"] = gen_adam.v[name]
        for name in critic_names:
            extras[f"adam.critic.m.{name}"] = critic_adam.m[name]
            extras[f"adam.critic.v.{name}"] = critic_adam.v[name]
        counters["gen_adam_steps"] = gen_adam.step
        counters["critic_adam_steps"] = critic_adam.step
        meta = {
            "counters": counters,
            "gap_history": gap_history,
            "train_config": asdict(cfg),
            "fps": fps,
        }
        path = os.path.join(out_dir or ".", f"checkpoint_{tag}.ckpt")
        save_checkpoint(
            path,
            Checkpoint(
                model_config=model_cfg,
                generator=gen_params,
                critic=critic_params,
                step=step,
                epoch=epoch_next,
                seed=seed,
                extras=extras,
                meta=meta,
            ),
        )
        checkpoints.append(path)
        return path

    epoch = start_epoch - 1
    for epoch in range(start_epoch, cfg.max_epochs):
        plan = schedule_plan(epoch, cfg)
        order = stream(seed, "shuffle", epoch).permutation(len(train_idx))
        batches = [
            train_idx[order[i * cfg.batch_size : (i + 1) * cfg.batch_size]]
            for i in range(n_batches)
        ]
        worst = 0.0
        for kind, b_i in epoch_actions(plan, n_batches):
            if kind == "critic":
                worst = max(worst, critic_batch_step(epoch, plan.phase, batches[b_i]))
            else:
                worst = max(worst, generator_batch_step(epoch, plan.phase, batches[b_i]))
        if progress is not None:
            progress(f"epoch {epoch} ({plan.phase}): step {step}")
        if worst > DIVERGENCE_LIMIT:
            diverged = True
            write_checkpoint(epoch + 1, "final")
            break
        last_epoch = epoch == cfg.max_epochs - 1
        if (epoch + 1) % cfg.eval_every == 0 or last_epoch:
            gap_history.append(critic_gap())
            if not last_epoch:
                write_checkpoint(epoch + 1, f"epoch{epoch + 1:04d}")
            if early_stop(gap_history, cfg.early_stop_patience):
                stopped_early = True
                break
    if not diverged:
        write_checkpoint(min(epoch + 1, cfg.max_epochs), "final")
    if log_fh is not None:
        log_fh.close()

    return TrainResult(
        generator=gen_params,
        critic=critic_params,
        log=log,
        checkpoints=checkpoints,
        counters=dict(counters),
        gap_history=gap_history,
        stopped_early=stopped_early,
        diverged=diverged,
    )
