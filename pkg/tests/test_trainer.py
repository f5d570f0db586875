import json
import os

import numpy as np
import pytest

from sketchplay.errors import ConfigError
from sketchplay.model import ModelConfig, xavier_init
from sketchplay.pipeline import order_players
from sketchplay.synth import synth_plays
from sketchplay.trainer import (
    AdamState,
    EpochPlan,
    TrainConfig,
    adam_step,
    early_stop,
    epoch_actions,
    parse_config_file,
    schedule_plan,
    train,
    write_config_file,
)


class TestSchedule:
    def test_epoch_3_pretrains(self):
        plan = schedule_plan(3, TrainConfig())
        assert plan.phase == "pretrain"
        assert plan.critic_iters_per_gen is None
        assert plan.gen_iters_per_epoch == 1

    def test_epoch_15_is_five_to_one(self):
        plan = schedule_plan(15, TrainConfig())
        assert plan.phase == "main"
        assert plan.critic_iters_per_gen == 5

    def test_epoch_30_is_ten_to_one(self):
        plan = schedule_plan(30, TrainConfig())
        assert plan.phase == "boost"
        assert plan.critic_iters_per_gen == 10

    def test_boost_at_pretrain_boundary(self):
        assert schedule_plan(10, TrainConfig()).phase == "boost"

    def test_actions_exact_ratio(self):
        plan = EpochPlan("main", 5, None)
        actions = epoch_actions(plan, 20)
        assert sum(1 for k, _ in actions if k == "critic") == 20
        assert sum(1 for k, _ in actions if k == "generator") == 4
        # Every generator step directly follows 5 critic steps.
        count = 0
        for kind, _ in actions:
            if kind == "critic":
                count += 1
            else:
                assert count == 5
                count = 0

    def test_actions_pretrain(self):
        actions = epoch_actions(EpochPlan("pretrain", None, 1), 7)
        assert actions[:-1] == [("critic", i) for i in range(7)]
        assert actions[-1] == ("generator", 6)

    def test_leftover_batches_feed_critic_only(self):
        actions = epoch_actions(EpochPlan("main", 5, None), 13)
        assert sum(1 for k, _ in actions if k == "critic") == 13
        assert sum(1 for k, _ in actions if k == "generator") == 2


class TestAdam:
    def _setup(self):
        cfg = ModelConfig(channels=4, residual_blocks=1, kernel=3, z_dim=4, t=4)
        gen, _ = xavier_init(cfg, seed=0)
        return gen, AdamState.for_params(gen)

    def test_zero_gradient_fixed_point(self):
        params, state = self._setup()
        before = {k: v.data.copy() for k, v in params.tensors.items()}
        grads = {k: np.zeros_like(v.data) for k, v in params.tensors.items()}
        adam_step(params, grads, state, TrainConfig())
        for k, v in params.tensors.items():
            assert np.array_equal(v.data, before[k])

    def test_first_step_magnitude_is_lr(self):
        params, state = self._setup()
        name = "cond_proj.b"
        params.tensors[name].data[:] = 0.0
        grads = {k: np.zeros_like(v.data) for k, v in params.tensors.items()}
        grads[name][0] = 1.0
        cfg = TrainConfig()
        adam_step(params, grads, state, cfg)
        assert params.tensors[name].data[0] == pytest.approx(-cfg.learning_rate, rel=1e-6)

    def test_deterministic(self):
        results = []
        for _ in range(2):
            params, state = self._setup()
            rng = np.random.default_rng(0)
            for _step in range(5):
                grads = {
                    k: rng.standard_normal(v.data.shape)
                    for k, v in params.tensors.items()
                }
                adam_step(params, grads, state, TrainConfig())
            results.append({k: v.data.copy() for k, v in params.tensors.items()})
        for k in results[0]:
            assert np.array_equal(results[0][k], results[1][k])

    def test_non_finite_gradient_skips_step(self):
        params, state = self._setup()
        before = {k: v.data.copy() for k, v in params.tensors.items()}
        grads = {k: np.zeros_like(v.data) for k, v in params.tensors.items()}
        grads["cond_proj.w"][0, 0] = np.nan
        adam_step(params, grads, state, TrainConfig())
        assert state.skipped == 1
        assert state.step == 0
        for k, v in params.tensors.items():
            assert np.array_equal(v.data, before[k])


class TestEarlyStop:
    def test_constant_gaps_false(self):
        assert not early_stop([1.0] * 10, patience=5)

    def test_five_widening_true(self):
        assert early_stop([0.1, 0.2, 0.3, 0.4, 0.5], patience=5)

    def test_four_widening_one_narrowing_false(self):
        assert not early_stop([0.1, 0.2, 0.3, 0.4, 0.35], patience=5)

    def test_short_history_false(self):
        assert not early_stop([0.1, 0.2], patience=5)


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg = TrainConfig(batch_size=32, max_epochs=12, seed=9, t=20)
        mcfg = ModelConfig(channels=16, residual_blocks=2, z_dim=8, t=20)
        path = os.path.join(tmp_path, "cfg.txt")
        write_config_file(path, cfg, mcfg)
        cfg2, mcfg2 = parse_config_file(path)
        assert cfg2 == cfg
        assert mcfg2 == mcfg

    def test_unknown_key_rejected(self, tmp_path):
        path = os.path.join(tmp_path, "cfg.txt")
        with open(path, "w") as fh:
            fh.write("momentum = 0.9\n")
        with pytest.raises(ConfigError):
            parse_config_file(path)

    def test_comments_and_blank_lines(self, tmp_path):
        path = os.path.join(tmp_path, "cfg.txt")
        with open(path, "w") as fh:
            fh.write("# a comment\n\nbatch_size = 16  # inline\n")
        cfg, _ = parse_config_file(path)
        assert cfg.batch_size == 16


@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    from sketchplay.synth import SynthConfig

    plays = [
        order_players(p)
        for p, _ in synth_plays("give-and-go", 24, seed=5, cfg=SynthConfig(t=25))
    ]
    cfg = TrainConfig(
        batch_size=7, t=25, max_epochs=6, pretrain_epochs=2, eval_every=2, seed=3
    )
    mcfg = ModelConfig(channels=8, residual_blocks=2, kernel=3, z_dim=8, t=25)
    out = str(tmp_path_factory.mktemp("tiny_run"))
    result = train(plays, cfg, mcfg, out_dir=out)
    return plays, cfg, mcfg, out, result


class TestTrain:
    def test_empty_dataset_rejected(self):
        with pytest.raises(ConfigError):
            train([], TrainConfig(), ModelConfig())

    def test_wrong_length_rejected(self):
        from sketchplay.synth import SynthConfig

        plays = [order_players(p) for p, _ in synth_plays("give-and-go", 4, seed=1, cfg=SynthConfig(t=25))]
        with pytest.raises(ConfigError):
            train(plays, TrainConfig(t=50, batch_size=2, max_epochs=1), ModelConfig(t=50))

    def test_run_completes_and_logs(self, tiny_run):
        _, cfg, _, out, result = tiny_run
        assert not result.diverged
        assert result.counters["critic_steps"] > 0
        assert result.counters["gen_steps"] > 0
        log_path = os.path.join(out, "train_log.jsonl")
        lines = [json.loads(line) for line in open(log_path)]
        assert len(lines) == len(result.log.records)
        steps = [rec["step"] for rec in lines]
        assert steps == sorted(steps)
        assert all("wall_s" not in rec for rec in lines)

    def test_schedule_counters_match_plan(self, tiny_run):
        _, cfg, _, _, result = tiny_run
        n_batches = (24 - 24 // 10) // cfg.batch_size  # 22 train plays, batch 7 -> 3
        expected_critic = 0
        expected_gen = 0
        for epoch in range(cfg.max_epochs):
            actions = epoch_actions(schedule_plan(epoch, cfg), n_batches)
            expected_critic += sum(1 for k, _ in actions if k == "critic")
            expected_gen += sum(1 for k, _ in actions if k == "generator")
        assert result.counters["critic_steps"] == expected_critic
        assert result.counters["gen_steps"] == expected_gen

    def test_checkpoints_written(self, tiny_run):
        _, _, _, out, result = tiny_run
        assert any(p.endswith("checkpoint_final.ckpt") for p in result.checkpoints)
        for p in result.checkpoints:
            assert os.path.exists(p)

    def test_resume_matches_uninterrupted(self, tiny_run, tmp_path):
        plays, cfg, mcfg, out, full = tiny_run
        # Stop after 4 epochs, resume for the last 2: identical log tail.
        short_cfg = TrainConfig(**{**cfg.__dict__, "max_epochs": 4})
        out_a = os.path.join(tmp_path, "a")
        part = train(plays, short_cfg, mcfg, out_dir=out_a)
        resume_ckpt = [p for p in part.checkpoints if p.endswith("final.ckpt")][0]
        out_b = os.path.join(tmp_path, "b")
        rest = train(plays, cfg, mcfg, out_dir=out_b, resume_from=resume_ckpt)
        full_steps = {r.step: r for r in full.log.records}
        for rec in rest.log.records:
            ref = full_steps[rec.step]
            assert rec.to_jsonl() == ref.to_jsonl()

    def test_determinism_bitwise(self, tiny_run, tmp_path):
        plays, cfg, mcfg, out, _ = tiny_run
        out2 = os.path.join(tmp_path, "again")
        train(plays, cfg, mcfg, out_dir=out2)
        log_a = open(os.path.join(out, "train_log.jsonl"), "rb").read()
        log_b = open(os.path.join(out2, "train_log.jsonl"), "rb").read()
        assert log_a == log_b
        ck_a = open(os.path.join(out, "checkpoint_final.ckpt"), "rb").read()
        ck_b = open(os.path.join(out2, "checkpoint_final.ckpt"), "rb").read()
        assert ck_a == ck_b
