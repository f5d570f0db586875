"""Canonical court geometry, play containers, and matrix codecs.

Coordinates are in feet on a half court, offense attacking the hoop at
low x. Time is in frames at a fixed rate (default 5 fps). The two matrix
encodings used by the network are:

* condition matrix, t x 18: ball xy, five offense xy, six ball-feature
  columns (one per offensive player plus the hoop);
* play tensor, t x 28: ball xy, five offense xy, five defense xy, and
  the same six ball-feature columns.

A ball-feature row is one-hot on the current carrier (or the hoop once
a shot is released) and all-zero while the ball is in flight on a pass.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DecodingError, EncodingError, ValidationError

# Frames may sit slightly out of bounds; tracking noise puts players a
# couple of feet off the court.
COURT_MARGIN_FT = 3.0

HOOP_POSSESSION = "hoop"

# Play-tensor column layout.
BALL_COLS = (0, 2)            # slice bounds [0, 2)
OFFENSE_COLS = (2, 12)
DEFENSE_COLS = (12, 22)
FEATURE_COLS = (22, 28)
CONDITION_FEATURE_COLS = (12, 18)
N_PLAYERS = 5
PLAY_TENSOR_WIDTH = 28
CONDITION_WIDTH = 18


@dataclass(frozen=True)
class Position:
    """A point on the court in feet."""

    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class CourtSpec:
    """Half-court geometry.

    Attributes:
        length_x: Court length along x in feet (baseline to half-court line).
        width_y: Court width along y in feet.
        hoop: Hoop position; offense always attacks this hoop.
    """

    length_x: float = 47.0
    width_y: float = 50.0
    hoop: Position = field(default_factory=lambda: Position(5.25, 25.0))

    def __post_init__(self) -> None:
        if self.length_x <= 0 or self.width_y <= 0:
            raise ValidationError("court dimensions must be positive")
        if not (0 < self.hoop.x < self.length_x and 0 < self.hoop.y < self.width_y):
            raise ValidationError("hoop must lie strictly inside the court")

    def contains(self, p: Position, margin: float = COURT_MARGIN_FT) -> bool:
        return (
            -margin <= p.x <= self.length_x + margin
            and -margin <= p.y <= self.width_y + margin
        )


@dataclass(frozen=True)
class Frame:
    """One tracked court snapshot.

    Attributes:
        ball: Ball position.
        offense: Positions of the five offensive players.
        defense: Positions of the five defenders, or None for
            condition-only data.
        possession: 1..5 for the offensive carrier, "hoop" once a shot
            is released, None while the ball is in flight on a pass.
    """

    ball: Position
    offense: tuple[Position, ...]
    defense: tuple[Position, ...] | None
    possession: int | str | None

    def positions(self) -> list[Position]:
        out = [self.ball, *self.offense]
        if self.defense is not None:
            out.extend(self.defense)
        return out


@dataclass(frozen=True)
class Play:
    """A timestamped sequence of frames at a fixed frame rate."""

    frames: tuple[Frame, ...]
    fps: float = 5.0

    @property
    def t(self) -> int:
        return len(self.frames)

    @property
    def has_defense(self) -> bool:
        return self.frames[0].defense is not None

    def validate(self, court: CourtSpec | None = None) -> list[str]:
        """Return a list of invariant violations (empty when valid)."""
        court = court or CourtSpec()
        issues: list[str] = []
        if self.fps <= 0:
            issues.append(f"fps must be positive, got {self.fps}")
        if len(self.frames) < 2:
            issues.append(f"play needs at least 2 frames, got {len(self.frames)}")
        has_def = self.frames[0].defense is not None if self.frames else False
        for i, f in enumerate(self.frames):
            if len(f.offense) != N_PLAYERS:
                issues.append(f"frame {i}: expected 5 offense positions")
            if (f.defense is not None) != has_def:
                issues.append(f"frame {i}: defense presence differs from frame 0")
            if f.defense is not None and len(f.defense) != N_PLAYERS:
                issues.append(f"frame {i}: expected 5 defense positions")
            if f.possession is not None and f.possession != HOOP_POSSESSION:
                if not (isinstance(f.possession, int) and 1 <= f.possession <= N_PLAYERS):
                    issues.append(f"frame {i}: bad possession {f.possession!r}")
            for p in f.positions():
                if not (math.isfinite(p.x) and math.isfinite(p.y)):
                    issues.append(f"frame {i}: non-finite position")
                elif not court.contains(p):
                    issues.append(f"frame {i}: position ({p.x}, {p.y}) out of bounds")
        return issues

    def require_valid(self, court: CourtSpec | None = None) -> "Play":
        issues = self.validate(court)
        if issues:
            raise ValidationError("; ".join(issues[:5]))
        return self


# Sketch types ---------------------------------------------------------------


@dataclass(frozen=True)
class PassEvent:
    """Phase-ending pass from one offensive player to another (1-based)."""

    from_player: int
    to_player: int


@dataclass(frozen=True)
class ShotEvent:
    """Phase-ending shot by an offensive player (1-based)."""

    by: int


EndEvent = PassEvent | ShotEvent | None


@dataclass(frozen=True)
class Phase:
    """One sketch phase: per-player polylines plus the event that ends it.

    Players absent from `paths` stand still for the whole phase. The end
    event is None only for the final phase of a sketch.
    """

    paths: dict[int, tuple[Position, ...]]
    end_event: EndEvent


@dataclass(frozen=True)
class SketchPlay:
    """A phase-structured offensive tactic as drawn on the board."""

    initial_positions: tuple[Position, ...]
    initial_dribbler: int
    phases: tuple[Phase, ...]

    def carrier_sequence(self) -> list[int]:
        """Ball carrier (1-based) at the start of each phase."""
        carriers = [self.initial_dribbler]
        for phase in self.phases[:-1]:
            ev = phase.end_event
            if isinstance(ev, PassEvent):
                carriers.append(ev.to_player)
            else:
                carriers.append(carriers[-1])
        return carriers


# Matrix codecs --------------------------------------------------------------


def _check_positions_bounded(tensor: np.ndarray, court: CourtSpec) -> None:
    pos = tensor[:, : FEATURE_COLS[0]]
    xs = pos[:, 0::2]
    ys = pos[:, 1::2]
    m = COURT_MARGIN_FT
    if (
        xs.min() < -m
        or xs.max() > court.length_x + m
        or ys.min() < -m
        or ys.max() > court.width_y + m
    ):
        raise ValidationError("positions out of court bounds beyond margin")


def feature_row(possession: int | str | None) -> np.ndarray:
    """Six-dimensional ball-feature vector for a possession flag."""
    row = np.zeros(6)
    if possession is None:
        return row
    if possession == HOOP_POSSESSION:
        row[5] = 1.0
    else:
        row[int(possession) - 1] = 1.0
    return row


def possession_from_features(row: np.ndarray, threshold: float = 0.5) -> int | str | None:
    """Decode a (soft) feature row; values below `threshold` mean in-flight."""
    k = int(np.argmax(row))
    if row[k] < threshold:
        return None
    return HOOP_POSSESSION if k == 5 else k + 1


def play_to_tensor(play: Play, court: CourtSpec | None = None) -> np.ndarray:
    """Encode a play with defense into a t x 28 tensor in feet."""
    court = court or CourtSpec()
    if not play.has_defense:
        raise EncodingError("play tensor requires defensive positions")
    t = play.t
    out = np.zeros((t, PLAY_TENSOR_WIDTH))
    for r, f in enumerate(play.frames):
        out[r, 0] = f.ball.x
        out[r, 1] = f.ball.y
        for i, p in enumerate(f.offense):
            out[r, 2 + 2 * i] = p.x
            out[r, 3 + 2 * i] = p.y
        assert f.defense is not None
        for i, p in enumerate(f.defense):
            out[r, 12 + 2 * i] = p.x
            out[r, 13 + 2 * i] = p.y
        out[r, 22:28] = feature_row(f.possession)
    _check_positions_bounded(out, court)
    return out


def tensor_to_play(
    tensor: np.ndarray,
    court: CourtSpec | None = None,
    threshold: float = 0.5,
    fps: float = 5.0,
) -> Play:
    """Decode a t x 28 tensor (feet) back into a play."""
    tensor = np.asarray(tensor, dtype=float)
    if tensor.ndim != 2 or tensor.shape[1] != PLAY_TENSOR_WIDTH:
        raise DecodingError(f"expected a t x 28 tensor, got {tensor.shape}")
    if not np.isfinite(tensor).all():
        raise DecodingError("tensor contains non-finite entries")
    frames = []
    for row in tensor:
        frames.append(
            Frame(
                ball=Position(row[0], row[1]),
                offense=tuple(Position(row[2 + 2 * i], row[3 + 2 * i]) for i in range(5)),
                defense=tuple(Position(row[12 + 2 * i], row[13 + 2 * i]) for i in range(5)),
                possession=possession_from_features(row[22:28], threshold),
            )
        )
    return Play(frames=tuple(frames), fps=fps)


def position_scale(court: CourtSpec, width: int) -> np.ndarray:
    """Per-column scale vector mapping positions to [0, 1] (features kept)."""
    n_pos = FEATURE_COLS[0] if width == PLAY_TENSOR_WIDTH else CONDITION_FEATURE_COLS[0]
    scale = np.ones(width)
    scale[0:n_pos:2] = court.length_x
    scale[1:n_pos:2] = court.width_y
    return scale


def normalize(tensor: np.ndarray, court: CourtSpec | None = None) -> np.ndarray:
    """Scale position columns to [0, 1] by court dimensions; features untouched."""
    court = court or CourtSpec()
    tensor = np.asarray(tensor, dtype=float)
    return tensor / position_scale(court, tensor.shape[-1])


def denormalize(tensor: np.ndarray, court: CourtSpec | None = None) -> np.ndarray:
    """Inverse of `normalize`."""
    court = court or CourtSpec()
    tensor = np.asarray(tensor, dtype=float)
    return tensor * position_scale(court, tensor.shape[-1])


# JSON interchange -----------------------------------------------------------


def _pos_to_list(p: Position) -> list[float]:
    return [float(p.x), float(p.y)]


def play_to_json(play: Play) -> dict:
    """Play -> interchange dict ({"fps":..,"frames":[{"ball":..,..}]})."""
    frames = []
    for f in play.frames:
        rec: dict = {
            "ball": _pos_to_list(f.ball),
            "offense": [_pos_to_list(p) for p in f.offense],
            "poss": f.possession,
        }
        if f.defense is not None:
            rec["defense"] = [_pos_to_list(p) for p in f.defense]
        frames.append(rec)
    return {"fps": play.fps, "frames": frames}


def play_from_json(obj: dict) -> Play:
    """Interchange dict -> Play. Raises DecodingError on malformed input."""
    try:
        frames = []
        for rec in obj["frames"]:
            defense = rec.get("defense")
            frames.append(
                Frame(
                    ball=Position(*map(float, rec["ball"])),
                    offense=tuple(Position(*map(float, p)) for p in rec["offense"]),
                    defense=None
                    if defense is None
                    else tuple(Position(*map(float, p)) for p in defense),
                    possession=rec.get("poss"),
                )
            )
        return Play(frames=tuple(frames), fps=float(obj.get("fps", 5.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodingError(f"malformed play JSON: {exc}") from exc


def write_plays_jsonl(plays: Iterable[Play], path: str) -> int:
    n = 0
    with open(path, "w") as fh:
        for play in plays:
            fh.write(json.dumps(play_to_json(play), sort_keys=True) + "\n")
            n += 1
    return n


def read_plays_jsonl(path: str) -> list[Play]:
    plays = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                plays.append(play_from_json(json.loads(line)))
    return plays
