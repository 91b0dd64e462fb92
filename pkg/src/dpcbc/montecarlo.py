"""Trial-parallel Monte Carlo driver with per-trial counter-based streams."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .numerics import RngStream


@dataclass
class TrialResult:
    """Outcome of one Monte Carlo trial."""

    throughput: float
    per_user: np.ndarray
    interference: float = 0.0


@dataclass
class ThroughputEstimate:
    mean: float
    stderr: float
    per_user: np.ndarray
    n_trials: int
    seed: int
    max_interference: float = 0.0
    samples: np.ndarray = field(default=None, repr=False)

    @property
    def ci95(self):
        return (self.mean - 1.96 * self.stderr, self.mean + 1.96 * self.stderr)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "per_user": [float(v) for v in self.per_user],
            "n_trials": self.n_trials,
            "seed": self.seed,
            "max_interference": self.max_interference,
        }


def run_trials(trial: Callable[[np.random.Generator], TrialResult], n_trials: int,
               seed: int, workers: int = 1) -> List[TrialResult]:
    """Run ``trial`` once per stream id ``0..n_trials-1``; results come back in trial order."""
    if n_trials < 1:
        raise InvalidArgumentError(f"need at least one trial, got {n_trials}")

    def one(t):
        return trial(RngStream(seed, t).generator)

    if workers <= 1:
        return [one(t) for t in range(n_trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n_trials)))


def summarize(results: Sequence[TrialResult], seed: int) -> ThroughputEstimate:
    """Reduce trial results with compensated sums, so the order of evaluation does not matter."""
    n = len(results)
    x = np.array([r.throughput for r in results])
    mean = math.fsum(x) / n
    if n > 1:
        var = math.fsum((x - mean) ** 2) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = math.nan
    per_user = np.array([math.fsum(col) / n for col in np.stack([r.per_user for r in results]).T])
    max_intf = max(r.interference for r in results)
    return ThroughputEstimate(mean=mean, stderr=stderr, per_user=per_user, n_trials=n,
                              seed=seed, max_interference=max_intf, samples=x)


def estimate(trial: Callable[[np.random.Generator], TrialResult], n_trials: int,
             seed: int, workers: Optional[int] = 1) -> ThroughputEstimate:
    return summarize(run_trials(trial, n_trials, seed, workers or 1), seed)
