import numpy as np
import pytest

from helpers import make_play, upsample_play
from sketchplay.court import PassEvent, Play, Position, ShotEvent
from sketchplay.errors import IngestError, SegmentationError, SkipPlayWarning
from sketchplay.pipeline import (
    BallEvent,
    derive_events,
    ingest,
    order_players,
    segment_by_ball_events,
    sketchify,
)
from sketchplay.synth import synth_plays


def _flat_play(t, poss=None):
    ball = [(10.0 + 0.1 * r, 20.0) for r in range(t)]
    offense = [[(5.0 + i * 3, 10.0 + 0.2 * r) for i in range(5)] for r in range(t)]
    defense = [[(5.0 + i * 3, 30.0) for i in range(5)] for r in range(t)]
    return make_play(ball, offense, defense, poss=poss or [1] * t)


class TestSegmentation:
    def test_pass_and_shot_ranges(self):
        play = _flat_play(50)
        events = (BallEvent(20, PassEvent(1, 2)), BallEvent(49, ShotEvent(2)))
        segs = segment_by_ball_events(play, events)
        assert [r for r, _ in segs] == [(0, 20), (21, 49)]

    def test_no_pass_single_range(self):
        play = _flat_play(30)
        segs = segment_by_ball_events(play, (BallEvent(29, ShotEvent(1)),))
        assert [r for r, _ in segs] == [(0, 29)]

    def test_pass_at_frame_zero(self):
        play = _flat_play(10)
        events = (BallEvent(0, PassEvent(1, 2)), BallEvent(9, ShotEvent(2)))
        segs = segment_by_ball_events(play, events)
        assert [r for r, _ in segs] == [(0, 0), (1, 9)]

    def test_out_of_range_event(self):
        play = _flat_play(10)
        with pytest.raises(SegmentationError):
            segment_by_ball_events(play, (BallEvent(12, ShotEvent(1)),))

    def test_events_must_increase(self):
        play = _flat_play(10)
        events = (
            BallEvent(5, PassEvent(1, 2)),
            BallEvent(5, PassEvent(2, 3)),
            BallEvent(9, ShotEvent(3)),
        )
        with pytest.raises(SegmentationError):
            segment_by_ball_events(play, events)

    def test_shot_must_be_last_frame(self):
        play = _flat_play(10)
        with pytest.raises(SegmentationError):
            segment_by_ball_events(play, (BallEvent(5, ShotEvent(1)),))


class TestDeriveEvents:
    @pytest.mark.parametrize(
        "template", ["give-and-go", "pick-and-roll", "ball-rotation", "random-motion"]
    )
    def test_matches_synth_script(self, template):
        for play, events in synth_plays(template, 4, seed=3):
            assert derive_events(play) == events


class TestIngest:
    def test_downsamples_250_frames_to_50(self):
        play, events = synth_plays("give-and-go", 1, seed=5)[0]
        raw = upsample_play(play, 5)  # 246 raw frames at 25 fps
        raw_events = tuple(BallEvent(e.frame * 5, e.action) for e in events)
        plays, logs, report = ingest([(raw, raw_events)], target_fps=5.0)
        assert report.ingested == 1
        out = plays[0]
        assert out.t == play.t
        assert out.fps == 5.0
        # Stride sampling reproduces the original frames bit-exactly.
        for f0, f1 in zip(play.frames, out.frames):
            assert f0.ball == f1.ball and f0.offense == f1.offense
        assert logs[0] == events

    def test_skips_play_without_shot(self):
        play = _flat_play(25)
        with pytest.warns(SkipPlayWarning):
            plays, _, report = ingest([(play, (BallEvent(5, PassEvent(1, 2)),))])
        assert plays == []
        assert report.skipped_no_shot == 1

    def test_mirrors_high_x_attack(self, court):
        t = 20
        ball = [(40.0, 25.0)] * t
        offense = [[(38.0 + 0.2 * i, 20.0 + i) for i in range(5)]] * t
        defense = [[(42.0, 20.0 + i) for i in range(5)]] * t
        play = make_play(ball, offense, defense, poss=[1] * (t - 1) + ["hoop"])
        plays, _, report = ingest([(play, (BallEvent(t - 1, ShotEvent(1)),))])
        assert report.mirrored == 1
        assert plays[0].frames[0].ball.x == pytest.approx(7.0)

    def test_rejects_non_divisible_fps(self):
        play = _flat_play(20)
        play = Play(frames=play.frames, fps=12.0)
        with pytest.raises(IngestError):
            ingest([(play, (BallEvent(19, ShotEvent(1)),))], target_fps=5.0)

    def test_trims_lead_in_outside_half(self, court):
        t = 30
        ball = [(49.5, 25.0)] * 3 + [(12.0, 25.0)] * (t - 3)
        offense = [[(12.0, 10.0 + i * 2) for i in range(5)]] * t
        defense = [[(8.0, 10.0 + i * 2) for i in range(5)]] * t
        poss = [1] * (t - 1) + ["hoop"]
        play = make_play(ball, offense, defense, poss=poss)
        plays, logs, report = ingest([(play, (BallEvent(t - 1, ShotEvent(1)),))])
        assert report.ingested == 1
        assert plays[0].t == t - 3
        assert logs[0][-1].frame == plays[0].t - 1


class TestSketchify:
    def test_condition_is_t_by_18(self):
        play, events = synth_plays("ball-rotation", 1, seed=2)[0]
        _, cond = sketchify(play, events)
        assert cond.shape == (50, 18)

    def test_stationary_player_reproduced_exactly(self):
        t = 20
        ball = [(10.0, 25.0)] * t
        offense = [[(10.0, 25.0), (20.0, 10.0), (20.0, 40.0), (30.0, 10.0), (30.0, 40.0)]] * t
        defense = [[(8.0, 25.0)] * 5] * t
        poss = [1] * (t - 2) + ["hoop"] * 2
        play = make_play(ball, offense, defense, poss=poss)
        _, cond = sketchify(play, derive_events(play))
        assert np.all(cond[:, 4:6] == (20.0, 10.0))

    def test_pass_frames_zero_features_and_collinear(self):
        play, events = synth_plays("give-and-go", 1, seed=9)[0]
        _, cond = sketchify(play, events)
        flight = [i for i, f in enumerate(play.frames) if f.possession is None]
        assert flight, "synth play should contain pass flights"
        for i in flight:
            assert np.all(cond[i, 12:18] == 0.0)
            a, b, c = cond[i - 1, 0:2], cond[i, 0:2], cond[i + 1, 0:2]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            assert abs(cross) < 1e-9

    def test_ball_equals_carrier_on_possessed_frames(self):
        play, events = synth_plays("pick-and-roll", 1, seed=4)[0]
        _, cond = sketchify(play, events)
        for i, f in enumerate(play.frames):
            if isinstance(f.possession, int):
                j = f.possession - 1
                assert np.all(cond[i, 0:2] == cond[i, 2 + 2 * j : 4 + 2 * j])

    def test_preserves_t(self):
        for play, events in synth_plays("random-motion", 5, seed=6):
            _, cond = sketchify(play, events)
            assert cond.shape[0] == play.t


class TestOrderPlayers:
    def _play_with_mean_distances(self, dists):
        t = 4
        ball = [(0.0, 25.0)] * t
        offense = [[(d, 25.0) for d in dists]] * t
        defense = [[(d, 27.0) for d in dists]] * t
        return make_play(ball, offense, defense, poss=[1] * t)

    def test_hand_computed_order(self):
        # Mean distances (8, 2, 5, 9, 1) -> canonical order (5, 2, 3, 1, 4).
        play = self._play_with_mean_distances([8.0, 2.0, 5.0, 9.0, 1.0])
        ordered = order_players(play)
        xs = [p.x for p in ordered.frames[0].offense]
        assert xs == [1.0, 2.0, 5.0, 8.0, 9.0]

    def test_permutation_invariance(self):
        play, _ = synth_plays("ball-rotation", 1, seed=13)[0]
        ordered = order_players(play)
        perm = [3, 0, 4, 1, 2]
        from sketchplay.court import Frame

        shuffled = Play(
            frames=tuple(
                Frame(
                    ball=f.ball,
                    offense=tuple(f.offense[i] for i in perm),
                    defense=f.defense,
                    possession=perm.index(f.possession - 1) + 1
                    if isinstance(f.possession, int)
                    else f.possession,
                )
                for f in play.frames
            ),
            fps=play.fps,
        )
        assert order_players(shuffled) == ordered

    def test_idempotent(self):
        play, _ = synth_plays("give-and-go", 1, seed=21)[0]
        once = order_players(play)
        assert order_players(once) == once

    def test_colocated_defenders_adopt_slots(self):
        t = 3
        ball = [(0.0, 25.0)] * t
        offense = [[(i + 1.0, 25.0) for i in range(5)]] * t
        defense = [[(i + 1.0, 25.0) for i in range(5)]] * t
        play = make_play(ball, offense, defense, poss=[1] * t)
        ordered = order_players(play)
        for f in ordered.frames:
            assert f.defense == f.offense

    def test_possession_flags_remapped(self):
        play = self._play_with_mean_distances([8.0, 2.0, 5.0, 9.0, 1.0])
        ordered = order_players(play)
        # Old player 1 (x=8) lands in slot 4 (1-based).
        assert ordered.frames[0].possession == 4


class TestSynth:
    def test_deterministic_byte_level(self):
        import json

        from sketchplay.court import play_to_json

        a = synth_plays("pick-and-roll", 3, seed=7)
        b = synth_plays("pick-and-roll", 3, seed=7)
        for (pa, ea), (pb, eb) in zip(a, b):
            assert json.dumps(play_to_json(pa)) == json.dumps(play_to_json(pb))
            assert ea == eb

    def test_give_and_go_has_two_passes_then_shot(self):
        for play, events in synth_plays("give-and-go", 5, seed=1):
            kinds = [type(e.action).__name__ for e in events]
            assert kinds == ["PassEvent", "PassEvent", "ShotEvent"]

    def test_plays_validate_clean(self):
        for template in ("give-and-go", "pick-and-roll", "ball-rotation", "random-motion"):
            for play, _ in synth_plays(template, 3, seed=17):
                assert play.validate() == []

    def test_dribbler_carries_ball(self):
        for play, _ in synth_plays("random-motion", 4, seed=23):
            for f in play.frames:
                if isinstance(f.possession, int):
                    assert f.ball.distance_to(f.offense[f.possession - 1]) <= 2.0

    def test_unknown_template(self):
        from sketchplay.errors import ConfigError

        with pytest.raises(ConfigError):
            synth_plays("triangle-offense", 1, seed=1)
