"""Sketch semantics: timing, condition encoding, validation, JSON codec.

A sketch has no clock. Each phase's frame count is derived from the
longest drawn trajectory and the mean movement speed observed in real
data, movement inside a phase is uniform-speed, and pass/shot flights
occupy a fixed small number of frames at the seam between phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .court import (
    CONDITION_WIDTH,
    CourtSpec,
    PassEvent,
    Phase,
    Position,
    ShotEvent,
    SketchPlay,
)
from .errors import SketchError, ValidationError
from .geometry import bezier_resample, polyline_length, rdp_simplify
from .pipeline import DEFAULT_RDP_EPSILON_FT

PASS_FLIGHT_FRAMES = 2
SHOT_FLIGHT_FRAMES = 2
START_TOLERANCE_FT = 5.0


@dataclass(frozen=True)
class TimingConfig:
    """Clock synthesis parameters.

    mean_speed is the mean offensive movement speed (ft/s) used to turn
    drawn distance into frames; min_segment_frames floors every phase.
    """

    mean_speed: float = 5.0
    fps: float = 5.0
    min_segment_frames: int = 5

    def __post_init__(self) -> None:
        if self.mean_speed <= 0 or self.fps <= 0 or self.min_segment_frames <= 0:
            raise ValidationError("timing parameters must be positive")


def segment_duration(phase: Phase, cfg: TimingConfig | None = None) -> int:
    """Frame count for a phase: max(floor, round(L_max / speed * fps))."""
    cfg = cfg or TimingConfig()
    longest = 0.0
    for path in phase.paths.values():
        longest = max(longest, polyline_length([p.as_tuple() for p in path]))
    return max(cfg.min_segment_frames, round(longest / cfg.mean_speed * cfg.fps))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    phase: int | None = None
    player: int | None = None

    def to_json(self) -> dict:
        out: dict = {"code": self.code, "message": self.message}
        if self.phase is not None:
            out["phase"] = self.phase
        if self.player is not None:
            out["player"] = self.player
        return out


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, phase: int | None = None, player: int | None = None):
        self.violations.append(Violation(code, message, phase, player))

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def validate_sketch(sketch: SketchPlay, court: CourtSpec | None = None) -> ValidationReport:
    """Collect rule violations (carrier chain, bounds, phase structure)."""
    court = court or CourtSpec()
    rep = ValidationReport()
    if len(sketch.initial_positions) != 5:
        rep.add("initial", f"expected 5 initial positions, got {len(sketch.initial_positions)}")
        return rep
    for i, p in enumerate(sketch.initial_positions):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            rep.add("bounds", "non-finite initial position", player=i + 1)
        elif not court.contains(p):
            rep.add("bounds", f"initial position ({p.x}, {p.y}) out of bounds", player=i + 1)
    if not 1 <= sketch.initial_dribbler <= 5:
        rep.add("dribbler", f"dribbler must be 1..5, got {sketch.initial_dribbler}")
        return rep
    if not sketch.phases:
        rep.add("phases", "sketch has no phases")
        return rep

    current = {i + 1: sketch.initial_positions[i] for i in range(5)}
    carrier = sketch.initial_dribbler
    last = len(sketch.phases) - 1
    for k, phase in enumerate(sketch.phases):
        for pid, path in phase.paths.items():
            if not 1 <= pid <= 5:
                rep.add("player", f"path for unknown player {pid}", phase=k)
                continue
            if len(path) < 2:
                rep.add("path", "polyline needs at least 2 points", phase=k, player=pid)
                continue
            for p in path:
                if not (math.isfinite(p.x) and math.isfinite(p.y)):
                    rep.add("bounds", "non-finite path point", phase=k, player=pid)
                    break
                if not court.contains(p):
                    rep.add(
                        "bounds", f"path point ({p.x}, {p.y}) out of bounds", phase=k, player=pid
                    )
                    break
            if path[0].distance_to(current[pid]) > START_TOLERANCE_FT:
                rep.add(
                    "path-start",
                    f"path starts {path[0].distance_to(current[pid]):.1f} ft from the "
                    "player's position at phase start",
                    phase=k,
                    player=pid,
                )
            current[pid] = path[-1]

        ev = phase.end_event
        if k < last:
            if not isinstance(ev, PassEvent):
                rep.add("phases", "only the final phase may end with a shot or nothing", phase=k)
            else:
                if ev.from_player != carrier:
                    rep.add(
                        "carrier",
                        f"pass from player {ev.from_player} but player {carrier} has the ball",
                        phase=k,
                    )
                if not 1 <= ev.to_player <= 5 or ev.to_player == ev.from_player:
                    rep.add("carrier", f"bad pass receiver {ev.to_player}", phase=k)
                else:
                    carrier = ev.to_player
        else:
            if isinstance(ev, PassEvent):
                rep.add("phases", "final phase must end with a shot or nothing", phase=k)
            elif isinstance(ev, ShotEvent) and ev.by != carrier:
                rep.add(
                    "carrier",
                    f"shot by player {ev.by} but player {carrier} has the ball",
                    phase=k,
                )
    return rep


def encode_condition(
    sketch: SketchPlay,
    cfg: TimingConfig | None = None,
    court: CourtSpec | None = None,
    epsilon: float = DEFAULT_RDP_EPSILON_FT,
    durations: list[int] | None = None,
    pass_flight_frames: int = PASS_FLIGHT_FRAMES,
    shot_flight_frames: int = SHOT_FLIGHT_FRAMES,
) -> np.ndarray:
    """Encode a sketch into its t x 18 condition matrix (feet).

    Every moving player is re-traced per phase with a Bezier curve over
    its RDP-simplified polyline, sampled uniformly in arc length across
    the phase's frames; stationary players repeat their position. The
    ball follows the carrier, flies straight for `pass_flight_frames` at
    the start of the phase after a pass (feature rows zero), and flies
    straight to the hoop over the final `shot_flight_frames` after the
    shot release (f_hoop set). `durations` overrides the timing rule.
    """
    cfg = cfg or TimingConfig()
    court = court or CourtSpec()
    report = validate_sketch(sketch, court)
    bounds_or_chain = [v for v in report.violations if v.code in ("bounds", "player", "path")]
    if bounds_or_chain:
        raise ValidationError(bounds_or_chain[0].message)
    if not report.ok:
        raise SketchError(report.violations[0].message)

    n_phases = len(sketch.phases)
    if durations is None:
        durations = [segment_duration(ph, cfg) for ph in sketch.phases]
    elif len(durations) != n_phases:
        raise SketchError(f"expected {n_phases} durations, got {len(durations)}")
    t = sum(durations)

    condition = np.zeros((t, CONDITION_WIDTH))
    current = {i + 1: np.array(sketch.initial_positions[i].as_tuple()) for i in range(5)}
    carrier = sketch.initial_dribbler
    hoop = np.array([court.hoop.x, court.hoop.y])

    row = 0
    incoming_pass = False
    for k, phase in enumerate(sketch.phases):
        d = durations[k]
        tracks = np.empty((d, 5, 2))
        for i in range(5):
            pid = i + 1
            if pid in phase.paths and d >= 2:
                pts = np.array([p.as_tuple() for p in phase.paths[pid]])
                ctrl = rdp_simplify(pts, epsilon)
                tracks[:, i] = bezier_resample(ctrl, d)
            else:
                start = (
                    np.array(phase.paths[pid][-1].as_tuple())
                    if pid in phase.paths
                    else current[pid]
                )
                tracks[:, i] = start
            current[pid] = tracks[-1, i].copy()
        condition[row : row + d, 2:12] = tracks.reshape(d, 10)

        flight = min(pass_flight_frames, d - 1) if incoming_pass else 0
        ball = np.empty((d, 2))
        ball[flight:] = tracks[flight:, carrier - 1]
        if flight:
            release = condition[row - 1, 0:2]
            catch = tracks[flight, carrier - 1]
            for j in range(flight):
                ball[j] = release + (catch - release) * ((j + 1) / (flight + 1))
        for j in range(flight, d):
            condition[row + j, 12 + carrier - 1] = 1.0

        ev = phase.end_event
        if isinstance(ev, ShotEvent):
            s = min(shot_flight_frames, d - 1)
            if s > 0:
                release_pos = ball[d - 1 - s].copy()
                for j in range(1, s + 1):
                    ball[d - s - 1 + j] = release_pos + (hoop - release_pos) * (j / s)
                condition[row + d - s : row + d, 12 + carrier - 1] = 0.0
                condition[row + d - s : row + d, 17] = 1.0
        condition[row : row + d, 0:2] = ball

        incoming_pass = isinstance(ev, PassEvent)
        if incoming_pass:
            carrier = ev.to_player
        row += d
    return condition


# JSON codec ------------------------------------------------------------------


def sketch_to_json(sketch: SketchPlay) -> dict:
    phases = []
    for phase in sketch.phases:
        ev = phase.end_event
        if isinstance(ev, PassEvent):
            end = {"type": "pass", "from": ev.from_player, "to": ev.to_player}
        elif isinstance(ev, ShotEvent):
            end = {"type": "shot", "by": ev.by}
        else:
            end = {"type": "none"}
        phases.append(
            {
                "paths": {
                    str(pid): [[float(p.x), float(p.y)] for p in path]
                    for pid, path in sorted(phase.paths.items())
                },
                "end": end,
            }
        )
    return {
        "initial": [[float(p.x), float(p.y)] for p in sketch.initial_positions],
        "dribbler": sketch.initial_dribbler,
        "phases": phases,
    }


def sketch_from_json(obj: dict) -> SketchPlay:
    try:
        initial = tuple(Position(float(x), float(y)) for x, y in obj["initial"])
        if len(initial) != 5:
            raise SketchError(f"expected 5 initial positions, got {len(initial)}")
        phases = []
        for rec in obj["phases"]:
            paths = {
                int(pid): tuple(Position(float(x), float(y)) for x, y in pts)
                for pid, pts in rec.get("paths", {}).items()
            }
            end = rec.get("end", {"type": "none"})
            kind = end.get("type")
            if kind == "pass":
                ev: PassEvent | ShotEvent | None = PassEvent(int(end["from"]), int(end["to"]))
            elif kind == "shot":
                ev = ShotEvent(int(end["by"]))
            elif kind == "none":
                ev = None
            else:
                raise SketchError(f"unknown end event type {kind!r}")
            phases.append(Phase(paths=paths, end_event=ev))
        return SketchPlay(
            initial_positions=initial,
            initial_dribbler=int(obj["dribbler"]),
            phases=tuple(phases),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SketchError(f"malformed sketch JSON: {exc}") from exc
