"""Canonical demo sketches used by tests, docs, and the UI."""

from __future__ import annotations

from .court import PassEvent, Phase, Position, ShotEvent, SketchPlay


def elbow_sketch() -> SketchPlay:
    """Elbow pick-and-roll: P1 feeds P4, P5 screens then rolls for the layup."""
    p = Position
    return SketchPlay(
        initial_positions=(
            p(25.0, 25.0),  # P1 point guard, top
            p(6.0, 8.0),    # P2 corner
            p(6.0, 42.0),   # P3 opposite corner
            p(14.0, 33.0),  # P4 power forward, elbow
            p(11.0, 30.0),  # P5 center
        ),
        initial_dribbler=1,
        phases=(
            Phase(
                paths={
                    1: (p(25.0, 25.0), p(22.0, 25.0)),
                    4: (p(14.0, 33.0), p(17.0, 30.0)),
                },
                end_event=PassEvent(1, 4),
            ),
            Phase(
                paths={
                    4: (p(17.0, 30.0), p(20.0, 27.0), p(14.0, 21.0)),
                    5: (p(11.0, 30.0), p(18.0, 28.0)),
                },
                end_event=PassEvent(4, 5),
            ),
            Phase(
                paths={
                    5: (p(18.0, 28.0), p(12.0, 26.0), p(8.0, 25.0)),
                },
                end_event=ShotEvent(5),
            ),
        ),
    )


def rotation_sketch() -> SketchPlay:
    """Quick top-to-corner ball rotation ending in a corner shot."""
    p = Position
    return SketchPlay(
        initial_positions=(
            p(24.0, 25.0),
            p(15.0, 38.0),
            p(5.0, 44.0),
            p(12.0, 12.0),
            p(4.5, 7.0),
        ),
        initial_dribbler=1,
        phases=(
            Phase(paths={1: (p(24.0, 25.0), p(22.0, 28.0))}, end_event=PassEvent(1, 2)),
            Phase(paths={2: (p(15.0, 38.0), p(13.0, 40.0))}, end_event=PassEvent(2, 3)),
            Phase(paths={4: (p(12.0, 12.0), p(10.0, 14.0))}, end_event=PassEvent(3, 4)),
            Phase(paths={4: (p(10.0, 14.0), p(9.0, 13.0))}, end_event=ShotEvent(4)),
        ),
    )
