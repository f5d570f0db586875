"""Tracking-data preparation: ingest, event segmentation, sketch synthesis,
and canonical player ordering.

Sketch synthesis imitates what a coach would draw for a real play: each
play is cut into phases at ball passes and the final shot, every player
trajectory inside a phase is simplified (RDP) and re-traced as a Bezier
curve sampled uniformly in arc length over the original frame count, and
the ball follows the carrier, straight pass lines, or a straight line to
the hoop.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .court import (
    CONDITION_WIDTH,
    HOOP_POSSESSION,
    CourtSpec,
    Frame,
    PassEvent,
    Phase,
    Play,
    Position,
    ShotEvent,
    SketchPlay,
)
from .errors import IngestError, SegmentationError, SkipPlayWarning
from .geometry import bezier_resample, polyline_length, rdp_simplify

DEFAULT_RDP_EPSILON_FT = 1.5


@dataclass(frozen=True)
class BallEvent:
    """A pass or shot pinned to a frame index."""

    frame: int
    action: PassEvent | ShotEvent


EventLog = tuple[BallEvent, ...]


def event_to_json(ev: BallEvent) -> dict:
    if isinstance(ev.action, PassEvent):
        return {
            "frame": ev.frame,
            "type": "pass",
            "from": ev.action.from_player,
            "to": ev.action.to_player,
        }
    return {"frame": ev.frame, "type": "shot", "by": ev.action.by}


def event_from_json(obj: dict) -> BallEvent:
    if obj["type"] == "pass":
        return BallEvent(int(obj["frame"]), PassEvent(int(obj["from"]), int(obj["to"])))
    if obj["type"] == "shot":
        return BallEvent(int(obj["frame"]), ShotEvent(int(obj["by"])))
    raise SegmentationError(f"unknown event type {obj['type']!r}")


def validate_events(play: Play, events: EventLog) -> None:
    if not events:
        raise SegmentationError("event log is empty")
    last = -1
    for ev in events:
        if not last < ev.frame < play.t:
            raise SegmentationError(
                f"event frame {ev.frame} out of order or outside play of length {play.t}"
            )
        last = ev.frame
    if not isinstance(events[-1].action, ShotEvent):
        raise SegmentationError("event log must end with a shot")
    for ev in events[:-1]:
        if isinstance(ev.action, ShotEvent):
            raise SegmentationError("shot before the final event")


def segment_by_ball_events(
    play: Play, events: EventLog
) -> list[tuple[tuple[int, int], PassEvent | ShotEvent]]:
    """Split [0, t) into contiguous inclusive ranges ending on event frames."""
    validate_events(play, events)
    if events[-1].frame != play.t - 1:
        raise SegmentationError(
            f"shot at frame {events[-1].frame} but play has {play.t} frames; "
            "ingest should trim the play at the shot"
        )
    segments = []
    start = 0
    for ev in events:
        segments.append(((start, ev.frame), ev.action))
        start = ev.frame + 1
    return segments


def derive_events(play: Play) -> EventLog:
    """Recover the pass/shot event log from per-frame possession flags."""
    events: list[BallEvent] = []
    carrier: int | None = None
    release_frame = -1
    for i, f in enumerate(play.frames):
        poss = f.possession
        if isinstance(poss, int):
            if carrier is not None and poss != carrier:
                events.append(BallEvent(release_frame, PassEvent(carrier, poss)))
            carrier = poss
            release_frame = i
    if carrier is None:
        raise SegmentationError("play has no possessed frames")
    events.append(BallEvent(play.t - 1, ShotEvent(carrier)))
    return tuple(events)


# Ingest ----------------------------------------------------------------------


@dataclass
class IngestReport:
    """Book-keeping for an ingest run."""

    ingested: int = 0
    skipped_no_shot: int = 0
    skipped_invalid: int = 0
    mirrored: int = 0
    notes: list[str] = field(default_factory=list)


def _mirror_play(play: Play, court: CourtSpec) -> Play:
    def flip(p: Position) -> Position:
        return Position(court.length_x - p.x, p.y)

    frames = tuple(
        Frame(
            ball=flip(f.ball),
            offense=tuple(flip(p) for p in f.offense),
            defense=None if f.defense is None else tuple(flip(p) for p in f.defense),
            possession=f.possession,
        )
        for f in play.frames
    )
    return Play(frames=frames, fps=play.fps)


def ingest(
    raw: list[tuple[Play, EventLog]],
    target_fps: float = 5.0,
    court: CourtSpec | None = None,
) -> tuple[list[Play], list[EventLog], IngestReport]:
    """Trim, orient, and downsample raw tracking plays.

    Each output play starts at the first frame the ball is inside the
    offensive half, ends at the shot event, runs at `target_fps` (frame
    striding), and attacks the low-x hoop. Plays without a shot event are
    skipped and counted.
    """
    court = court or CourtSpec()
    report = IngestReport()
    plays: list[Play] = []
    logs: list[EventLog] = []
    for idx, (play, events) in enumerate(raw):
        if play.fps < target_fps or (play.fps / target_fps) != int(play.fps / target_fps):
            raise IngestError(
                f"play {idx}: fps {play.fps} not an integer multiple of {target_fps}"
            )
        stride = int(play.fps / target_fps)
        shot_frames = [ev.frame for ev in events if isinstance(ev.action, ShotEvent)]
        if not shot_frames:
            warnings.warn(f"play {idx}: no shot event, skipped", SkipPlayWarning)
            report.skipped_no_shot += 1
            continue
        shot = shot_frames[0]

        # Canonical orientation: the ball should end up at the low-x hoop.
        if play.frames[shot].ball.x > court.length_x / 2.0:
            play = _mirror_play(play, court)
            report.mirrored += 1

        start = next(
            (i for i, f in enumerate(play.frames) if f.ball.x <= court.length_x),
            None,
        )
        if start is None or start > shot:
            report.skipped_invalid += 1
            report.notes.append(f"play {idx}: ball never enters the offensive half")
            continue

        n = (shot - start) // stride + 1
        frames = tuple(play.frames[start + k * stride] for k in range(n))
        out = Play(frames=frames, fps=target_fps)
        new_events: list[BallEvent] = []
        for ev in events:
            if ev.frame < start:
                continue
            nf = (ev.frame - start) // stride
            if new_events and nf <= new_events[-1].frame:
                raise IngestError(f"play {idx}: events collide after downsampling")
            new_events.append(BallEvent(nf, ev.action))
            if isinstance(ev.action, ShotEvent):
                break
        issues = out.validate(court)
        if issues:
            report.skipped_invalid += 1
            report.notes.append(f"play {idx}: {issues[0]}")
            continue
        plays.append(out)
        logs.append(tuple(new_events))
        report.ingested += 1
    return plays, logs, report


# Sketch synthesis ------------------------------------------------------------


def _offense_array(play: Play) -> np.ndarray:
    out = np.empty((play.t, 5, 2))
    for r, f in enumerate(play.frames):
        for i, p in enumerate(f.offense):
            out[r, i, 0] = p.x
            out[r, i, 1] = p.y
    return out


def _smooth_segment(points: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """RDP + arc-length Bezier retrace of one player's segment trajectory.

    Returns (smoothed points, control polyline). Single-frame segments are
    returned as-is with a degenerate two-point control polyline.
    """
    n = len(points)
    if n == 1:
        ctrl = np.vstack([points[0], points[0]])
        return points.copy(), ctrl
    ctrl = rdp_simplify(points, epsilon)
    return bezier_resample(ctrl, n), ctrl


def sketchify(
    play: Play,
    events: EventLog,
    epsilon: float = DEFAULT_RDP_EPSILON_FT,
    court: CourtSpec | None = None,
) -> tuple[SketchPlay, np.ndarray]:
    """Synthesize the sketch and its t x 18 condition matrix from a real play."""
    court = court or CourtSpec()
    segments = segment_by_ball_events(play, events)
    t = play.t
    offense = _offense_array(play)
    smoothed = np.empty_like(offense)
    phases: list[Phase] = []

    for (a, b), action in segments:
        paths: dict[int, tuple[Position, ...]] = {}
        for i in range(5):
            seg, ctrl = _smooth_segment(offense[a : b + 1, i], epsilon)
            smoothed[a : b + 1, i] = seg
            if polyline_length(ctrl) > 0.0:
                paths[i + 1] = tuple(Position(x, y) for x, y in ctrl)
        phases.append(Phase(paths=paths, end_event=action))

    # Ball track and features from possession flags.
    condition = np.zeros((t, CONDITION_WIDTH))
    condition[:, 2:12] = smoothed.reshape(t, 10)
    ball = np.zeros((t, 2))
    possessed = [isinstance(f.possession, int) for f in play.frames]
    hoop_flag = [f.possession == HOOP_POSSESSION for f in play.frames]
    for r, f in enumerate(play.frames):
        if isinstance(f.possession, int):
            ball[r] = smoothed[r, f.possession - 1]
            condition[r, 12 + f.possession - 1] = 1.0
        elif f.possession == HOOP_POSSESSION:
            condition[r, 17] = 1.0

    # Shot flight: straight line from the release point to the hoop.
    hoop = np.array([court.hoop.x, court.hoop.y])
    r = 0
    while r < t:
        if hoop_flag[r]:
            run_start = r
            while r < t and hoop_flag[r]:
                r += 1
            release = ball[run_start - 1] if run_start > 0 else hoop
            k = r - run_start
            for j in range(k):
                ball[run_start + j] = release + (hoop - release) * ((j + 1) / k)
        else:
            r += 1

    # Pass flight: straight line between the surrounding carrier positions.
    r = 0
    while r < t:
        if not possessed[r] and not hoop_flag[r]:
            run_start = r
            while r < t and not possessed[r] and not hoop_flag[r]:
                r += 1
            prev_idx = run_start - 1
            next_idx = r if r < t else None
            p0 = ball[prev_idx] if prev_idx >= 0 else None
            p1 = ball[next_idx] if next_idx is not None else None
            if p0 is None:
                p0 = p1
            if p1 is None:
                p1 = p0
            if p0 is None:
                raise SegmentationError("ball is in flight for the whole play")
            span = (next_idx if next_idx is not None else t) - prev_idx
            for j in range(run_start, min(r, t)):
                frac = (j - prev_idx) / span
                ball[j] = p0 + (p1 - p0) * frac
        else:
            r += 1
    condition[:, 0:2] = ball

    first_poss = play.frames[0].possession
    if not isinstance(first_poss, int):
        raise SegmentationError("play must start with a possessed frame")
    sketch = SketchPlay(
        initial_positions=tuple(Position(x, y) for x, y in smoothed[0]),
        initial_dribbler=first_poss,
        phases=tuple(phases),
    )
    return sketch, condition


# Canonical player order -------------------------------------------------------


def _mean_ball_distances(play: Play) -> np.ndarray:
    d = np.zeros(5)
    for f in play.frames:
        for i, p in enumerate(f.offense):
            d[i] += f.ball.distance_to(p)
    return d / play.t


def order_players(play: Play) -> Play:
    """Sort offense by mean ball distance; defenders adopt their man's slot.

    Offensive players are ordered ascending by their mean distance to the
    ball over the play. Each defender is then matched one-to-one to its
    closest offensive player (mean distance over frames, greedy in
    ascending order) and placed in that player's output slot. Possession
    flags are remapped to the new offensive indices.
    """
    if not play.has_defense:
        raise ValueError("order_players requires defensive positions")
    means = _mean_ball_distances(play)
    order = np.argsort(means, kind="stable")  # old index per new slot
    slot_of = np.empty(5, dtype=int)  # new slot per old index
    for new, old in enumerate(order):
        slot_of[old] = new

    # defender x offense mean-distance matrix
    dmat = np.zeros((5, 5))
    for f in play.frames:
        assert f.defense is not None
        for d_i, dp in enumerate(f.defense):
            for o_i, op in enumerate(f.offense):
                dmat[d_i, o_i] += dp.distance_to(op)
    dmat /= play.t

    pairs = sorted(
        ((dmat[d_i, o_i], d_i, o_i) for d_i in range(5) for o_i in range(5)),
        key=lambda x: (x[0], x[1], x[2]),
    )
    d_used = [False] * 5
    o_used = [False] * 5
    defender_slot = np.empty(5, dtype=int)  # new slot per old defender index
    for _, d_i, o_i in pairs:
        if d_used[d_i] or o_used[o_i]:
            continue
        d_used[d_i] = True
        o_used[o_i] = True
        defender_slot[d_i] = slot_of[o_i]

    frames = []
    for f in play.frames:
        assert f.defense is not None
        offense = tuple(f.offense[old] for old in order)
        defense_arr: list[Position | None] = [None] * 5
        for d_i, p in enumerate(f.defense):
            defense_arr[defender_slot[d_i]] = p
        poss = f.possession
        if isinstance(poss, int):
            poss = int(slot_of[poss - 1]) + 1
        frames.append(
            Frame(
                ball=f.ball,
                offense=offense,
                defense=tuple(p for p in defense_arr if p is not None),
                possession=poss,
            )
        )
    return Play(frames=tuple(frames), fps=play.fps)
