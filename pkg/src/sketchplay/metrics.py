"""Comparison statistics for real vs simulated plays.

Velocity is reported as scalar speed |p_{t+1} - p_t| * fps; acceleration
as the norm of the second difference times fps^2 (the same integrand the
training loss uses). Ball-dribbler distance counts only frames where a
player possesses the ball; ball-defender distance uses the per-frame
nearest defender.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .court import CourtSpec, Play, play_to_tensor

ENTITIES = ("ball", "offense", "defense")

_DEFINITIONS = (
    "speed = |p[t+1] - p[t]| * fps (ft/s); "
    "acceleration = |p[t+1] - 2 p[t] + p[t-1]| * fps^2 (ft/s^2); "
    "ball_dribbler over possessed frames only; ball_defender to the "
    "nearest defender per frame; stds are population stds"
)


def _entity_tracks(play: Play, entity: str) -> np.ndarray:
    """(t, k, 2) positions; k = 1 for the ball, 5 for a team."""
    if entity == "ball":
        return np.array([[f.ball.as_tuple()] for f in play.frames])
    if entity == "offense":
        return np.array([[p.as_tuple() for p in f.offense] for f in play.frames])
    if entity == "defense":
        if not play.has_defense:
            raise ValueError("play has no defense")
        return np.array([[p.as_tuple() for p in f.defense] for f in play.frames])
    raise ValueError(f"unknown entity {entity!r}")


def speed_series(play: Play, entity: str) -> np.ndarray:
    """Speeds in ft/s; shape (t-1,) for the ball, (t-1, 5) for a team."""
    p = _entity_tracks(play, entity)
    d = p[1:] - p[:-1]
    v = np.sqrt(np.sum(d * d, axis=2)) * play.fps
    return v[:, 0] if entity == "ball" else v


def accel_series(play: Play, entity: str) -> np.ndarray:
    """Acceleration magnitudes in ft/s^2; length t-2 along time."""
    p = _entity_tracks(play, entity)
    sd = (p[2:] - 2.0 * p[1:-1]) + p[:-2]
    a = np.sqrt(np.sum(sd * sd, axis=2)) * (play.fps * play.fps)
    return a[:, 0] if entity == "ball" else a


@dataclass(frozen=True)
class StatsReport:
    """Pooled mean/std statistics over a batch of plays."""

    ball_speed_mean: float
    ball_speed_std: float
    ball_accel_mean: float
    ball_accel_std: float
    offense_speed_mean: float
    offense_speed_std: float
    offense_accel_mean: float
    offense_accel_std: float
    defense_speed_mean: float
    defense_speed_std: float
    defense_accel_mean: float
    defense_accel_std: float
    ball_dribbler_mean: float
    ball_dribbler_std: float
    ball_defender_mean: float
    ball_defender_std: float
    n_plays: int
    possessed_frames: int

    def to_json(self) -> dict:
        out = {"definitions": _DEFINITIONS}
        out.update(asdict(self))
        return out


def _pooled(values: list[np.ndarray]) -> tuple[float, float]:
    flat = np.concatenate([np.ravel(v) for v in values]) if values else np.array([])
    if flat.size == 0:
        return float("nan"), float("nan")
    return float(np.mean(flat)), float(np.std(flat))


def play_stats(plays: list[Play]) -> StatsReport:
    """Table-style statistics pooled over all frames and plays."""
    if not plays:
        raise ValueError("empty batch")
    speeds = {e: [] for e in ENTITIES}
    accels = {e: [] for e in ENTITIES}
    dribbler: list[np.ndarray] = []
    defender: list[np.ndarray] = []
    possessed = 0
    for play in plays:
        for e in ENTITIES:
            speeds[e].append(speed_series(play, e))
            accels[e].append(accel_series(play, e))
        x = play_to_tensor(play)
        ball = x[:, 0:2]
        off = x[:, 2:12].reshape(-1, 5, 2)
        deff = x[:, 12:22].reshape(-1, 5, 2)
        feats = x[:, 22:27]
        carried = feats.sum(axis=1) > 0
        possessed += int(carried.sum())
        if carried.any():
            idx = np.argmax(feats[carried], axis=1)
            dp = ball[carried] - off[carried, idx]
            dribbler.append(np.sqrt(np.sum(dp * dp, axis=1)))
        dd = deff - ball[:, None, :]
        defender.append(np.min(np.sqrt(np.sum(dd * dd, axis=2)), axis=1))

    stats: dict[str, float] = {}
    for e in ENTITIES:
        stats[f"{e}_speed_mean"], stats[f"{e}_speed_std"] = _pooled(speeds[e])
        stats[f"{e}_accel_mean"], stats[f"{e}_accel_std"] = _pooled(accels[e])
    stats["ball_dribbler_mean"], stats["ball_dribbler_std"] = _pooled(dribbler)
    stats["ball_defender_mean"], stats["ball_defender_std"] = _pooled(defender)
    return StatsReport(n_plays=len(plays), possessed_frames=possessed, **stats)


@dataclass
class HeatmapGrid:
    """Defender mean-speed grid; cells without visits are NaN, not zero."""

    cell_size: float
    counts: np.ndarray      # (nx, ny) ints
    mean_speed: np.ndarray  # (nx, ny), NaN where count == 0

    @property
    def total_count(self) -> int:
        return int(self.counts.sum())


def velocity_heatmap(
    plays: list[Play], cell_size: float = 1.0, court: CourtSpec | None = None
) -> HeatmapGrid:
    """Accumulate per-frame defender speeds into court cells."""
    court = court or CourtSpec()
    nx = int(np.ceil(court.length_x / cell_size))
    ny = int(np.ceil(court.width_y / cell_size))
    counts = np.zeros((nx, ny), dtype=np.int64)
    total = np.zeros((nx, ny))
    for play in plays:
        tracks = _entity_tracks(play, "defense")  # (t, 5, 2)
        v = speed_series(play, "defense")         # (t-1, 5)
        pos = tracks[:-1]                         # speed attributed to its start frame
        ix = np.clip((pos[..., 0] / cell_size).astype(int), 0, nx - 1)
        iy = np.clip((pos[..., 1] / cell_size).astype(int), 0, ny - 1)
        np.add.at(counts, (ix, iy), 1)
        np.add.at(total, (ix, iy), v)
    with np.errstate(invalid="ignore"):
        mean = np.where(counts > 0, total / np.maximum(counts, 1), np.nan)
    return HeatmapGrid(cell_size=cell_size, counts=counts, mean_speed=mean)


def write_heatmap_csv(grid: HeatmapGrid, path: str) -> None:
    """Mean-speed grid as CSV (rows = x cells); empty cells are blank."""
    with open(path, "w") as fh:
        fh.write("# defender mean speed (ft/s), cell_size=%g ft, rows=x, cols=y\n" % grid.cell_size)
        for row in grid.mean_speed:
            fh.write(",".join("" if np.isnan(v) else f"{v:.6f}" for v in row) + "\n")


def write_heatmap_dat(grid: HeatmapGrid, path: str) -> None:
    """gnuplot-style blocks: `x y mean count`, blank line between x rows."""
    nx, ny = grid.counts.shape
    with open(path, "w") as fh:
        fh.write("# x_ft y_ft mean_speed count\n")
        for i in range(nx):
            for j in range(ny):
                x = (i + 0.5) * grid.cell_size
                y = (j + 0.5) * grid.cell_size
                m = grid.mean_speed[i, j]
                fh.write(f"{x:.3f} {y:.3f} {'nan' if np.isnan(m) else f'{m:.6f}'} {grid.counts[i, j]}\n")
            fh.write("\n")


def write_stats_report(real: StatsReport, generated: StatsReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"real": real.to_json(), "generated": generated.to_json()}, fh, indent=2)
        fh.write("\n")
