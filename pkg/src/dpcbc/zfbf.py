"""Zeroforcing beamforming comparator on quantized directions."""

import math

import numpy as np

from .channel import SystemConfig, sample_channel
from .errors import InvalidArgumentError
from .montecarlo import ThroughputEstimate, TrialResult, estimate
from .numerics import qr_factor
from .quantization import QubModel, perfect_csit, quantize_channel


def zfbf_vectors(Hhat_on: np.ndarray) -> np.ndarray:
    """Unit-norm columns of ``Hhat_on (Hhat_on^* Hhat_on)^{-1}``.

    Computed as ``Q R^{-*}`` from the QR factorization, so rank deficiency
    surfaces as :class:`~dpcbc.errors.SingularMatrixError`.
    """
    Q, R = qr_factor(Hhat_on)
    V = np.linalg.solve(R, Q.conj().T).conj().T
    return V / np.linalg.norm(V, axis=0, keepdims=True)


def zfbf_rates(H_on: np.ndarray, V: np.ndarray, P: float):
    """Per-user rates (bits) and residual interference powers for beamformers ``V``."""
    s = V.shape[1]
    G = np.abs(H_on.conj().T @ V) ** 2  # G[i, j] = |h_i^* w_j|^2
    sig = np.diag(G)
    intf = G.sum(axis=1) - sig
    rates = np.log2(1.0 + (P / s) * sig / (1.0 + (P / s) * intf))
    return rates, intf


def trial(cfg: SystemConfig, gen: np.random.Generator) -> TrialResult:
    channel = sample_channel(cfg, gen)
    if cfg.perfect_csit or cfg.K == 1:
        csit = perfect_csit(channel)
    else:
        csit = quantize_channel(channel, QubModel(cfg.K, cfg.r), gen)
    V = zfbf_vectors(csit.Hhat[:, :cfg.s])
    rates, intf = zfbf_rates(channel.H[:, :cfg.s], V, cfg.P)
    return TrialResult(throughput=math.fsum(rates) / cfg.K, per_user=rates,
                       interference=float(np.max(intf)))


def zfbf_throughput_mc(cfg: SystemConfig, n_outer: int = 500, seed: int = 42,
                       workers: int = 1) -> ThroughputEstimate:
    if n_outer < 1:
        raise InvalidArgumentError(f"n_outer must be >= 1, got {n_outer}")
    return estimate(lambda gen: trial(cfg, gen), n_outer, seed, workers)
