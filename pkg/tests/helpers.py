"""Shared test utilities: independent oracles and small builders."""

from __future__ import annotations

import numpy as np

from sketchplay.court import CourtSpec, Frame, Play, Position
from sketchplay.geometry import point_segment_distance


def rdp_oracle_mask(points: np.ndarray, eps: float) -> np.ndarray:
    """Fixpoint formulation of the RDP rule, sharing no code with the
    recursive implementation: repeatedly insert the farthest-deviating
    point of any kept-pair gap that exceeds eps, until stable. O(n^3).
    """
    n = len(points)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    if eps == 0.0:
        keep[:] = True
        return keep
    changed = True
    while changed:
        changed = False
        kept = np.flatnonzero(keep)
        for a, b in zip(kept, kept[1:]):
            best, best_d = -1, eps
            for i in range(a + 1, b):
                d = point_segment_distance(points[i], points[a], points[b])
                if d > best_d:
                    best, best_d = i, d
            if best >= 0:
                keep[best] = True
                changed = True
    return keep


def bezier_dense_decasteljau(control: np.ndarray, m: int) -> np.ndarray:
    """Dense curve samples via De Casteljau only (arc-length oracle)."""
    out = np.empty((m + 1, 2))
    for i, t in enumerate(np.linspace(0.0, 1.0, m + 1)):
        pts = np.array(control, dtype=float)
        while len(pts) > 1:
            pts = (1.0 - t) * pts[:-1] + t * pts[1:]
        out[i] = pts[0]
    return out


def make_play(
    ball: list[tuple[float, float]],
    offense: list[list[tuple[float, float]]],
    defense: list[list[tuple[float, float]]] | None = None,
    poss: list | None = None,
    fps: float = 5.0,
) -> Play:
    """Build a play from per-frame coordinate lists."""
    t = len(ball)
    frames = []
    for r in range(t):
        frames.append(
            Frame(
                ball=Position(*ball[r]),
                offense=tuple(Position(*p) for p in offense[r]),
                defense=None if defense is None else tuple(Position(*p) for p in defense[r]),
                possession=None if poss is None else poss[r],
            )
        )
    return Play(frames=tuple(frames), fps=fps)


def random_valid_play(rng: np.random.Generator, t: int = 12, fps: float = 5.0) -> Play:
    """Random in-bounds play with defense and mixed possession flags."""
    court = CourtSpec()
    frames = []
    poss_choices = [1, 2, 3, 4, 5, None, "hoop"]
    for _ in range(t):
        frames.append(
            Frame(
                ball=Position(rng.uniform(0, court.length_x), rng.uniform(0, court.width_y)),
                offense=tuple(
                    Position(rng.uniform(0, court.length_x), rng.uniform(0, court.width_y))
                    for _ in range(5)
                ),
                defense=tuple(
                    Position(rng.uniform(0, court.length_x), rng.uniform(0, court.width_y))
                    for _ in range(5)
                ),
                possession=poss_choices[int(rng.integers(0, len(poss_choices)))],
            )
        )
    return Play(frames=tuple(frames), fps=fps)


def upsample_play(play: Play, factor: int) -> Play:
    """Linear position upsampling (possession held from the source frame);
    frame k*factor reproduces source frame k exactly."""
    frames = []
    src = play.frames
    for k in range(len(src) - 1):
        a, b = src[k], src[k + 1]
        for j in range(factor):
            u = j / factor

            def lerp(p, q):
                return Position(p.x + (q.x - p.x) * u, p.y + (q.y - p.y) * u)

            frames.append(
                Frame(
                    ball=lerp(a.ball, b.ball),
                    offense=tuple(lerp(p, q) for p, q in zip(a.offense, b.offense)),
                    defense=tuple(lerp(p, q) for p, q in zip(a.defense, b.defense))
                    if a.defense is not None
                    else None,
                    possession=a.possession,
                )
            )
    frames.append(src[-1])
    return Play(frames=tuple(frames), fps=play.fps * factor)
