"""Gaussian broadcast channel: K transmit antennas, K single-antenna users.

User ``i`` observes ``y_i = h_i^* x + z_i`` with unit-variance noise, so the
total transmit power ``P`` is also the SNR. Under the on-off policy the first
``s`` users each get power ``P / s`` and the rest are silent.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .numerics import RngLike, sample_complex_gaussian


@dataclass(frozen=True)
class SystemConfig:
    """Finite-dimensional system parameters.

    Attributes
    ----------
    K : int
        Number of transmit antennas, equal to the number of users.
    P : float
        Total transmit power (linear); noise has unit variance.
    s : int
        Number of active users; the active set is users ``1..s``.
    r : float
        Feedback bits per user. ``math.inf`` means perfect CSIT.
    """

    K: int
    P: float
    s: int
    r: float

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise InvalidArgumentError(f"K must be a positive integer, got {self.K}")
        if not (self.P >= 0 and math.isfinite(self.P)):
            raise InvalidArgumentError(f"P must be finite and >= 0, got {self.P}")
        if int(self.s) != self.s or not 1 <= self.s <= self.K:
            raise InvalidArgumentError(f"s must be an integer in [1, K={self.K}], got {self.s}")
        if not self.r >= 0:
            raise InvalidArgumentError(f"r must be >= 0, got {self.r}")

    @property
    def power_per_user(self) -> float:
        return self.P / self.s

    @property
    def perfect_csit(self) -> bool:
        return math.isinf(self.r)


@dataclass(frozen=True)
class ChannelRealization:
    """Channel matrix ``H`` whose ``i``-th column is ``h_i``."""

    H: np.ndarray

    @property
    def K(self) -> int:
        return self.H.shape[0]

    @property
    def norms2(self) -> np.ndarray:
        """Squared column norms ``||h_i||^2``."""
        return np.sum(np.abs(self.H) ** 2, axis=0)

    @property
    def directions(self) -> np.ndarray:
        return self.H / np.sqrt(self.norms2)[None, :]


def sample_channel(cfg: SystemConfig, rng: RngLike) -> ChannelRealization:
    # rows of the draw are users, so transpose to get h_i as columns
    H = sample_complex_gaussian(cfg.K, rng, size=cfg.K).T
    return ChannelRealization(np.ascontiguousarray(H))
