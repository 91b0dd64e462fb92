import math

import numpy as np
import pytest

from dpcbc.channel import SystemConfig, sample_channel
from dpcbc.errors import InvalidArgumentError
from dpcbc.numerics import RngStream


def test_scalar_channel_unit_power():
    cfg = SystemConfig(K=1, P=1.0, s=1, r=0)
    rng = RngStream(10)
    g = np.array([abs(sample_channel(cfg, rng).H[0, 0]) ** 2 for _ in range(100_000)])
    assert abs(g.mean() - 1.0) <= 3 * g.std() / math.sqrt(g.size)


def test_channel_deterministic():
    cfg = SystemConfig(K=8, P=1.0, s=8, r=8)
    a = sample_channel(cfg, RngStream(3, 9)).H
    b = sample_channel(cfg, RngStream(3, 9)).H
    assert np.array_equal(a, b)
    assert a.shape == (8, 8) and np.all(np.isfinite(a))


def test_normalized_column_norm_mean():
    cfg = SystemConfig(K=16, P=1.0, s=16, r=16)
    rng = RngStream(4)
    x = np.concatenate([sample_channel(cfg, rng).norms2 / 16 for _ in range(2000)])
    assert abs(x.mean() - 1.0) <= 3 * x.std() / math.sqrt(x.size)


def test_column_norm_concentration_at_256():
    cfg = SystemConfig(K=256, P=1.0, s=256, r=256)
    rng = RngStream(5)
    x = np.array([sample_channel(cfg, rng).norms2 / 256 for _ in range(100)])
    # per user, the worst of 100 trials
    assert np.max(np.abs(x[:, 0] - 1.0)) <= 0.25
    assert np.median(np.max(np.abs(x - 1.0), axis=0)) <= 0.25


@pytest.mark.parametrize("kw", [
    dict(K=0, P=1.0, s=1, r=1),
    dict(K=4, P=-1.0, s=1, r=1),
    dict(K=4, P=1.0, s=5, r=1),
    dict(K=4, P=1.0, s=0, r=1),
    dict(K=4, P=1.0, s=2, r=-1),
])
def test_config_validation(kw):
    with pytest.raises(InvalidArgumentError):
        SystemConfig(**kw)


def test_perfect_csit_flag():
    assert SystemConfig(4, 1.0, 2, math.inf).perfect_csit
    assert SystemConfig(4, 10.0, 2, 3).power_per_user == 5.0
