import numpy as np
import pytest

from sketchplay.court import CourtSpec
from sketchplay.fixtures import elbow_sketch
from sketchplay.model import ModelConfig, xavier_init
from sketchplay.pipeline import order_players
from sketchplay.synth import synth_plays


@pytest.fixture(scope="session")
def court():
    return CourtSpec()


@pytest.fixture(scope="session")
def elbow():
    return elbow_sketch()


@pytest.fixture(scope="session")
def toy_config():
    # Acceptance toy size: t=10, 8 channels, 3 residual blocks.
    return ModelConfig(channels=8, residual_blocks=3, kernel=5, z_dim=16, t=10)


@pytest.fixture(scope="session")
def toy_params(toy_config):
    return xavier_init(toy_config, seed=3)


@pytest.fixture(scope="session")
def small_plays():
    return [order_players(p) for p, _ in synth_plays("ball-rotation", 12, seed=11)]


@pytest.fixture(scope="session")
def random_pairs(toy_config):
    """Random normalized (y, x, g) batches at toy size for loss/grad tests."""
    from sketchplay.model import generator_forward

    gen, _ = xavier_init(toy_config, seed=3)
    rng = np.random.default_rng(5)
    y = rng.uniform(0, 1, (2, toy_config.t, 18))
    z = rng.standard_normal((2, toy_config.z_dim))
    g = generator_forward(z, y, gen).data
    x = np.concatenate(
        [rng.uniform(0, 1, (2, toy_config.t, 22)), rng.uniform(0.05, 0.2, (2, toy_config.t, 6))],
        axis=2,
    )
    return y, x, g
