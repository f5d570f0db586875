"""Synthetic set-play generation.

Desk-scale stand-in for real tracking data: scripted waypoint motion with
smooth correlated noise, defenders shadowing their assigned man on the
hoop side, and a ball that is carried, passed on straight 2-frame
flights, and shot on a straight line to the hoop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .court import CourtSpec, Frame, HOOP_POSSESSION, PassEvent, Play, Position, ShotEvent
from .errors import ConfigError
from .pipeline import BallEvent, EventLog
from .seeding import stream

TEMPLATES = ("give-and-go", "pick-and-roll", "ball-rotation", "random-motion")

PASS_FLIGHT_FRAMES = 2
SHOT_FLIGHT_FRAMES = 2


@dataclass(frozen=True)
class SynthConfig:
    t: int = 50
    fps: float = 5.0
    defender_sag: float = 0.28      # fraction of the way toward the hoop
    defender_gain: float = 0.45     # first-order lag toward the target
    defender_noise: float = 0.30    # ft per frame, smoothed
    player_noise: float = 0.25
    ball_jitter: float = 0.9        # carried-ball wobble amplitude, ft


def _ou_noise(rng: np.random.Generator, n: int, sigma: float, rho: float = 0.85) -> np.ndarray:
    """Smooth (Ornstein-Uhlenbeck style) 2-D noise track."""
    out = np.zeros((n, 2))
    step = sigma * np.sqrt(1.0 - rho * rho)
    for i in range(1, n):
        out[i] = rho * out[i - 1] + step * rng.standard_normal(2)
    return out


def _ease(u: float) -> float:
    return u * u * (3.0 - 2.0 * u)


def _waypoint_track(
    waypoints: list[tuple[int, np.ndarray]], t: int, rng: np.random.Generator, noise: float
) -> np.ndarray:
    """Smoothstep interpolation through (frame, point) waypoints plus noise."""
    pos = np.zeros((t, 2))
    fs = [f for f, _ in waypoints]
    ps = [p for _, p in waypoints]
    for r in range(t):
        if r <= fs[0]:
            pos[r] = ps[0]
        elif r >= fs[-1]:
            pos[r] = ps[-1]
        else:
            k = next(i for i in range(len(fs) - 1) if fs[i] <= r < fs[i + 1])
            u = (r - fs[k]) / (fs[k + 1] - fs[k])
            pos[r] = ps[k] + (ps[k + 1] - ps[k]) * _ease(u)
    return pos + _ou_noise(rng, t, noise)


def _clip_court(track: np.ndarray, court: CourtSpec, pad: float = 0.5) -> np.ndarray:
    track[:, 0] = np.clip(track[:, 0], pad, court.length_x - pad)
    track[:, 1] = np.clip(track[:, 1], pad, court.width_y - pad)
    return track


@dataclass
class _Script:
    """Waypoints per player plus the scripted carrier chain."""

    spots: list[np.ndarray]                          # initial positions
    waypoints: list[list[tuple[int, np.ndarray]]]    # per player
    passes: list[tuple[int, int, int]]               # (release frame, from, to) 1-based
    shooter: int


def _jitter(rng: np.random.Generator, p: tuple[float, float], amt: float = 2.0) -> np.ndarray:
    return np.array(p) + rng.uniform(-amt, amt, 2)


def _script_give_and_go(rng: np.random.Generator, t: int) -> _Script:
    spots = [
        _jitter(rng, (24.0, 25.0)),  # P1 top of key
        _jitter(rng, (13.0, 10.0)),  # P2 wing
        _jitter(rng, (13.0, 40.0)),  # P3 opposite wing
        _jitter(rng, (4.0, 6.0)),    # P4 corner
        _jitter(rng, (4.0, 44.0)),   # P5 opposite corner
    ]
    e1 = round(t * 0.20) + int(rng.integers(0, 3))
    e2 = round(t * 0.60) + int(rng.integers(0, 3))
    cut = _jitter(rng, (8.0, 22.0), 1.5)
    wing_drift = _jitter(rng, (16.0, 44.0), 1.5)
    waypoints = [
        [(0, spots[0]), (e1 + 2, spots[0]), (e2 + 3, cut), (t - 1, cut)],
        [(0, spots[1]), (t - 1, spots[1])],
        [(0, spots[2]), (e2, wing_drift), (t - 1, wing_drift)],
        [(0, spots[3]), (t - 1, spots[3])],
        [(0, spots[4]), (t - 1, spots[4])],
    ]
    return _Script(spots, waypoints, passes=[(e1, 1, 2), (e2, 2, 1)], shooter=1)


def _script_pick_and_roll(rng: np.random.Generator, t: int) -> _Script:
    spots = [
        _jitter(rng, (26.0, 25.0)),  # P1 handler
        _jitter(rng, (10.0, 8.0)),
        _jitter(rng, (10.0, 42.0)),
        _jitter(rng, (3.5, 5.0)),
        _jitter(rng, (17.0, 31.0)),  # P5 screener
    ]
    screen = spots[0] + np.array([-3.0, 3.0])
    drive = _jitter(rng, (12.0, 19.0), 1.5)
    roll = _jitter(rng, (7.5, 28.0), 1.0)
    e1 = round(t * 0.66) + int(rng.integers(0, 3))
    waypoints = [
        [(0, spots[0]), (round(t * 0.28), spots[0]), (round(t * 0.64), drive), (t - 1, drive)],
        [(0, spots[1]), (t - 1, spots[1])],
        [(0, spots[2]), (t - 1, spots[2])],
        [(0, spots[3]), (t - 1, spots[3])],
        [(0, spots[4]), (round(t * 0.24), screen), (round(t * 0.40), screen), (round(t * 0.80), roll), (t - 1, roll)],
    ]
    return _Script(spots, waypoints, passes=[(e1, 1, 5)], shooter=5)


def _script_ball_rotation(rng: np.random.Generator, t: int) -> _Script:
    spots = [
        _jitter(rng, (24.0, 25.0)),
        _jitter(rng, (15.0, 38.0)),
        _jitter(rng, (5.0, 44.0)),
        _jitter(rng, (12.0, 12.0)),
        _jitter(rng, (4.5, 7.0)),
    ]
    e1 = round(t * 0.18) + int(rng.integers(0, 3))
    e2 = round(t * 0.42) + int(rng.integers(0, 3))
    e3 = round(t * 0.66) + int(rng.integers(0, 3))
    drift1 = _jitter(rng, (22.0, 18.0), 1.5)
    drift4 = _jitter(rng, (9.0, 14.0), 1.5)
    waypoints = [
        [(0, spots[0]), (e1 + 4, spots[0]), (round(t * 0.56), drift1), (t - 1, drift1)],
        [(0, spots[1]), (t - 1, spots[1])],
        [(0, spots[2]), (t - 1, spots[2])],
        [(0, spots[3]), (e3, drift4), (t - 1, drift4)],
        [(0, spots[4]), (t - 1, spots[4])],
    ]
    return _Script(spots, waypoints, passes=[(e1, 1, 2), (e2, 2, 3), (e3, 3, 4)], shooter=4)


def _script_random_motion(rng: np.random.Generator, t: int) -> _Script:
    spots = []
    for _ in range(5):
        spots.append(np.array([rng.uniform(4.0, 30.0), rng.uniform(4.0, 46.0)]))
    waypoints = []
    for i in range(5):
        n_wp = int(rng.integers(1, 4))
        frames = np.sort(rng.choice(np.arange(5, t - 4), size=n_wp, replace=False))
        wps = [(0, spots[i])]
        for f in frames:
            wps.append((int(f), spots[i] + rng.uniform(-9.0, 9.0, 2)))
        wps.append((t - 1, wps[-1][1]))
        waypoints.append(wps)
    spacing = PASS_FLIGHT_FRAMES + 4
    slots = np.arange(round(t * 0.15), t - SHOT_FLIGHT_FRAMES - spacing - 1, spacing)
    n_pass = int(rng.integers(1, min(4, len(slots) + 1)))
    frames = np.sort(rng.choice(slots, size=n_pass, replace=False))
    carrier = 1
    passes = []
    for f in frames:
        to = int(rng.choice([i for i in range(1, 6) if i != carrier]))
        passes.append((int(f), carrier, to))
        carrier = to
    return _Script(spots, waypoints, passes=passes, shooter=carrier)


_SCRIPTS = {
    "give-and-go": _script_give_and_go,
    "pick-and-roll": _script_pick_and_roll,
    "ball-rotation": _script_ball_rotation,
    "random-motion": _script_random_motion,
}


def _build_play(
    script: _Script, cfg: SynthConfig, court: CourtSpec, rng: np.random.Generator
) -> tuple[Play, EventLog]:
    t = cfg.t
    offense = np.zeros((t, 5, 2))
    for i in range(5):
        offense[:, i] = _clip_court(
            _waypoint_track(script.waypoints[i], t, rng, cfg.player_noise), court
        )
    hoop = np.array([court.hoop.x, court.hoop.y])
    defense = np.zeros((t, 5, 2))
    for i in range(5):
        noise = _ou_noise(rng, t, cfg.defender_noise)
        d = offense[0, i] + cfg.defender_sag * (hoop - offense[0, i]) + rng.uniform(-1, 1, 2)
        for r in range(t):
            target = offense[r, i] + cfg.defender_sag * (hoop - offense[r, i])
            d = d + cfg.defender_gain * (target - d) + noise[r]
            defense[r, i] = d
        _clip_court(defense[:, i], court)

    # Possession timeline: carrier indices, None on flights, hoop at the end.
    poss: list[int | str | None] = [0] * t
    release = t - 1 - SHOT_FLIGHT_FRAMES
    boundaries = [*script.passes, (release, script.shooter, 0)]
    r = 0
    for frame, frm, _to in boundaries:
        for j in range(r, frame + 1):
            poss[j] = frm
        r = frame + 1 + PASS_FLIGHT_FRAMES if frame != release else frame + 1
        for j in range(frame + 1, min(r, t)):
            poss[j] = None
    for j in range(release + 1, t):
        poss[j] = HOOP_POSSESSION

    # Ball: carried with jitter (norm kept under 2 ft), straight flights
    # on passes and the shot.
    ball = np.zeros((t, 2))
    wobble = _ou_noise(rng, t, cfg.ball_jitter)
    norms = np.linalg.norm(wobble, axis=1, keepdims=True)
    wobble = wobble * np.minimum(1.0, 1.8 / np.maximum(norms, 1e-9))
    for r in range(t):
        if isinstance(poss[r], int):
            ball[r] = offense[r, poss[r] - 1] + wobble[r]
    for frame, frm, to in script.passes:
        catch = frame + 1 + PASS_FLIGHT_FRAMES
        p0 = ball[frame]
        p1 = ball[catch]
        for k in range(1, PASS_FLIGHT_FRAMES + 1):
            ball[frame + k] = p0 + (p1 - p0) * (k / (PASS_FLIGHT_FRAMES + 1))
    p0 = ball[release]
    for k in range(1, SHOT_FLIGHT_FRAMES + 1):
        ball[release + k] = p0 + (hoop - p0) * (k / SHOT_FLIGHT_FRAMES)

    frames = []
    for r in range(t):
        frames.append(
            Frame(
                ball=Position(*ball[r]),
                offense=tuple(Position(*offense[r, i]) for i in range(5)),
                defense=tuple(Position(*defense[r, i]) for i in range(5)),
                possession=poss[r],
            )
        )
    play = Play(frames=tuple(frames), fps=cfg.fps)
    events: list[BallEvent] = [
        BallEvent(frame, PassEvent(frm, to)) for frame, frm, to in script.passes
    ]
    events.append(BallEvent(t - 1, ShotEvent(script.shooter)))
    return play, tuple(events)


MIN_T = 25


def synth_plays(
    template: str,
    count: int,
    seed: int,
    cfg: SynthConfig | None = None,
    court: CourtSpec | None = None,
) -> list[tuple[Play, EventLog]]:
    """Generate `count` deterministic plays from a named template.

    Each play draws from its own (seed, index) random stream, so the
    output is independent of generation order or parallelism.
    """
    if template not in _SCRIPTS:
        raise ConfigError(f"unknown template {template!r}; choose from {TEMPLATES}")
    cfg = cfg or SynthConfig()
    if cfg.t < MIN_T:
        raise ConfigError(f"templates need t >= {MIN_T} frames, got {cfg.t}")
    court = court or CourtSpec()
    out = []
    for idx in range(count):
        rng = stream(seed, "synth", idx)
        script = _SCRIPTS[template](rng, cfg.t)
        out.append(_build_play(script, cfg, court, rng))
    return out
