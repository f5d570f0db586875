"""Adversarial and heuristic training losses, computed in court feet.

The heuristic terms score generated play tensors directly: ball stays on
the soft-predicted dribbler, the nearest defender pressures the ball
(angle-weighted toward the hoop), pass flights are straight, and player
accelerations match real plays. All terms are differentiable through the
minimal autodiff layer; batched inputs reduce to batch means.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .model import CriticParams, critic_forward

DEGENERATE_LENGTH_FT = 1e-6


@dataclass(frozen=True)
class LossReport:
    """One generator step's loss breakdown."""

    adversarial: float
    dribbler: float
    defender: float
    ball_pass: float
    acceleration: float
    composite: float
    w: float

    def to_json(self) -> dict:
        return asdict(self)


def _batched(x) -> tuple[Tensor, bool]:
    """Expand a single (t, k) play to (1, t, k); returns (tensor, was_single)."""
    t = ad.as_tensor(x)
    if t.ndim == 2:
        return ad.reshape(t, (1, *t.shape)), True
    return t, False


def _scalarize(per_play: Tensor, was_single: bool) -> Tensor:
    if was_single:
        return ad.reshape(per_play, ())
    return ad.mean(per_play)


def _guarded_angle(ux: Tensor, uy: Tensor, vx: Tensor, vy: Tensor) -> Tensor:
    """Angle in [0, pi] between vectors u and v via atan2(|cross|, dot).

    Where either vector is shorter than 1e-6 the angle is defined as 0;
    the degenerate entries are substituted with (cross, dot) = (0, 1)
    before atan2 so no NaN enters the gradient graph.
    """
    mask_np = (
        (np.hypot(ux.data, uy.data) >= DEGENERATE_LENGTH_FT)
        & (np.hypot(vx.data, vy.data) >= DEGENERATE_LENGTH_FT)
    ).astype(np.float64)
    mask = Tensor(mask_np)
    cross = ad.sub(ad.mul(ux, vy), ad.mul(uy, vx))
    dot = ad.add(ad.mul(ux, vx), ad.mul(uy, vy))
    cross = ad.mul(cross, mask)
    dot = ad.add(ad.mul(dot, mask), Tensor(1.0 - mask_np))
    return ad.mul(ad.atan2(ad.tabs(cross), dot), mask)


# Adversarial (Wasserstein with gradient penalty) -------------------------------


def gradient_penalty(
    critic: CriticParams,
    y,
    x,
    g,
    lam: float = 10.0,
    epsilon_draws=None,
) -> Tensor:
    """lam * mean((||grad_xhat C(xhat | y)||_2 - 1)^2) over the batch.

    xhat interpolates real and generated plays per sample with the given
    uniform draws; the condition is held fixed in the pair.
    """
    y = np.asarray(y.data if isinstance(y, Tensor) else y, dtype=np.float64)
    x = np.asarray(x.data if isinstance(x, Tensor) else x, dtype=np.float64)
    g = np.asarray(g.data if isinstance(g, Tensor) else g, dtype=np.float64)
    if y.ndim == 2:
        y, x, g = y[None], x[None], g[None]
    batch = x.shape[0]
    if epsilon_draws is None:
        raise ValueError("gradient_penalty needs explicit epsilon draws")
    eps = np.asarray(epsilon_draws, dtype=np.float64).reshape(batch, 1, 1)

    # The inner gradient needs the tape even when the caller runs no_grad.
    with ad.enable_grad():
        xhat = Tensor(eps * x + (1.0 - eps) * g, requires_grad=True)
        pair = ad.concat([Tensor(y), xhat], axis=2)
        scores = critic_forward(pair, critic)
        (gx,) = ad.grad(ad.tsum(scores), [xhat])
        norms = ad.sqrt(ad.tsum(ad.square(gx), axis=(1, 2)))
        return ad.scale(ad.tsum(ad.square(ad.sub(norms, 1.0))), lam / batch)


def critic_loss(real_scores, fake_scores, penalty) -> Tensor:
    """mean(fake) - mean(real) + penalty (critic minimizes this)."""
    return ad.add(ad.sub(ad.mean(fake_scores), ad.mean(real_scores)), penalty)


def generator_adv_loss(fake_scores) -> Tensor:
    """-mean(fake scores): lower when the critic rates fakes as real."""
    return ad.neg(ad.mean(fake_scores))


# Heuristic terms ----------------------------------------------------------------


def dribbler_loss(g) -> Tensor:
    """Sum over frames and players of f_i * |ball - player_i| (feet).

    Zero whenever the soft features are zero (ball passing or shooting).
    Batched input reduces to the batch mean of per-play sums.
    """
    x, was_single = _batched(g)
    ball = ad.slice_ax(x, 2, 0, 2)
    players = ad.reshape(ad.slice_ax(x, 2, 2, 12), (x.shape[0], x.shape[1], 5, 2))
    feats = ad.slice_ax(x, 2, 22, 27)
    diff = ad.sub(ad.reshape(ball, (x.shape[0], x.shape[1], 1, 2)), players)
    dist = ad.sqrt(ad.tsum(ad.square(diff), axis=3))
    per_play = ad.tsum(ad.mul(feats, dist), axis=(1, 2))
    return _scalarize(per_play, was_single)


def defender_pressure(play, hoop=(5.25, 25.0)) -> Tensor:
    """Sum over frames of (1 + theta) * (1 + |nearest defender - ball|).

    theta is the angle at the ball between the nearest defender and the
    hoop (0 when either vector is degenerate). Returns a scalar for a
    single play, a (B,) tensor for a batch.
    """
    x, was_single = _batched(play)
    b, t = x.shape[0], x.shape[1]
    ball = ad.slice_ax(x, 2, 0, 2)
    defenders = ad.reshape(ad.slice_ax(x, 2, 12, 22), (b, t, 5, 2))
    diff = ad.sub(defenders, ad.reshape(ball, (b, t, 1, 2)))  # p_d - p_b
    d2 = ad.tsum(ad.square(diff), axis=3)

    nearest = np.argmin(d2.data, axis=2)
    sel = np.zeros((b, t, 5, 1))
    np.put_along_axis(sel, nearest[..., None, None], 1.0, axis=2)
    u = ad.tsum(ad.mul(diff, Tensor(sel)), axis=2)  # (B, t, 2)
    dist = ad.sqrt(ad.tsum(ad.square(u), axis=2))

    hoop_arr = np.asarray(hoop, dtype=np.float64)
    v = ad.sub(Tensor(hoop_arr.reshape(1, 1, 2)), ad.reshape(ball, (b, t, 2)))
    theta = _guarded_angle(
        ad.reshape(ad.slice_ax(u, 2, 0, 1), (b, t)),
        ad.reshape(ad.slice_ax(u, 2, 1, 2), (b, t)),
        ad.reshape(ad.slice_ax(v, 2, 0, 1), (b, t)),
        ad.reshape(ad.slice_ax(v, 2, 1, 2), (b, t)),
    )
    per_play = ad.tsum(ad.mul(ad.add(theta, 1.0), ad.add(dist, 1.0)), axis=1)
    if was_single:
        return ad.reshape(per_play, ())
    return per_play


def defender_loss(real_batch, fake_batch, hoop=(5.25, 25.0)) -> Tensor:
    """|mean D(real) - mean D(fake)| over the two batches."""
    real = _batched(real_batch)[0]
    fake = _batched(fake_batch)[0]
    return ad.tabs(
        ad.sub(
            ad.mean(defender_pressure(real, hoop)),
            ad.mean(defender_pressure(fake, hoop)),
        )
    )


def ball_pass_loss(g) -> Tensor:
    """Sum over interior frames of clamp(1 - sum_i f_i, 0, 1) * turning angle.

    The turning angle of the ball track is 0 for straight motion, pi for
    a reversal, and 0 whenever an adjacent displacement is degenerate;
    possessed frames contribute nothing, so only pass/shot flight is
    straightened.
    """
    x, was_single = _batched(g)
    b, t = x.shape[0], x.shape[1]
    ball = ad.slice_ax(x, 2, 0, 2)
    prev = ad.slice_ax(ball, 1, 0, t - 2)
    mid = ad.slice_ax(ball, 1, 1, t - 1)
    nxt = ad.slice_ax(ball, 1, 2, t)
    u = ad.sub(mid, prev)
    v = ad.sub(nxt, mid)
    phi = _guarded_angle(
        ad.reshape(ad.slice_ax(u, 2, 0, 1), (b, t - 2)),
        ad.reshape(ad.slice_ax(u, 2, 1, 2), (b, t - 2)),
        ad.reshape(ad.slice_ax(v, 2, 0, 1), (b, t - 2)),
        ad.reshape(ad.slice_ax(v, 2, 1, 2), (b, t - 2)),
    )
    feats = ad.slice_ax(x, 2, 22, 27)
    poss = ad.tsum(ad.slice_ax(feats, 1, 1, t - 1), axis=2)
    weight = ad.clip(ad.sub(1.0, poss), 0.0, 1.0)
    per_play = ad.tsum(ad.mul(weight, phi), axis=1)
    return _scalarize(per_play, was_single)


def acceleration_series(x, fps: float = 5.0) -> Tensor:
    """Per-frame, per-player acceleration magnitudes |second diff| * fps^2.

    Shape (B, t-2, 10) over the ten players (ball excluded); shares its
    definition with the evaluation metrics.
    """
    x, _ = _batched(x)
    b, t = x.shape[0], x.shape[1]
    players = ad.reshape(ad.slice_ax(x, 2, 2, 22), (b, t, 10, 2))
    p_prev = ad.slice_ax(players, 1, 0, t - 2)
    p_mid = ad.slice_ax(players, 1, 1, t - 1)
    p_next = ad.slice_ax(players, 1, 2, t)
    sd = ad.add(ad.sub(p_next, ad.scale(p_mid, 2.0)), p_prev)
    return ad.scale(ad.sqrt(ad.tsum(ad.square(sd), axis=3)), fps * fps)


def mean_acceleration(batch, fps: float = 5.0) -> Tensor:
    """Mean acceleration over plays, frames, and all ten players."""
    return ad.mean(acceleration_series(batch, fps))


def acceleration_loss(real_batch, fake_batch, fps: float = 5.0) -> Tensor:
    """|mu(real) - mu(fake)| of mean player acceleration."""
    return ad.tabs(
        ad.sub(mean_acceleration(real_batch, fps), mean_acceleration(fake_batch, fps))
    )


# Composite -----------------------------------------------------------------------


def adaptive_weight(critic_scores) -> float:
    """w = mean |critic score|, detached from differentiation."""
    scores = critic_scores.data if isinstance(critic_scores, Tensor) else critic_scores
    return float(np.mean(np.abs(scores)))


def composite_generator_loss(adv, d, b, w_loss, a, critic_scores) -> Tensor:
    """adv + w * (L_d + L_b + L_w + L_a) with w = mean |critic score|.

    w is treated as a constant: no gradient flows through it.
    """
    w = adaptive_weight(critic_scores)
    heur = ad.add(ad.add(ad.as_tensor(d), ad.as_tensor(b)), ad.add(ad.as_tensor(w_loss), ad.as_tensor(a)))
    return ad.add(ad.as_tensor(adv), ad.scale(heur, w))
