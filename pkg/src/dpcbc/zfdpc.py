"""Zeroforcing dirty-paper coding (ZFDPC) with quantized CSIT.

Users are encoded in natural order. The beamformers are the columns of ``Q``
in the QR factorization of the quantized directions of the active users, so
user ``i`` is zeroforced (on its quantized direction) towards users ``k > i``,
while interference from users ``j < i`` is pre-cancelled by DPC with
inflation factor ``W_i``.

Notation used throughout: ``Omega`` is the ``K x s`` beamformer matrix,
``l_i = Omega[:, :i-1]^* h^_i`` and ``b = 1 - D - D/(K-1)``. User indices
``i`` are 1-based encoding positions.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .channel import SystemConfig, sample_channel
from .errors import InvalidArgumentError, NumericDomainError
from .montecarlo import ThroughputEstimate, TrialResult, estimate
from .numerics import RngLike, as_generator, qr_factor
from .quantization import (QuantizedCsit, QubModel, expected_distortion, perfect_csit,
                           quantize_channel, sample_conditional_channel)

_MAX_CONDITION = 1e12


@dataclass(frozen=True)
class BeamformingPlan:
    omegas: np.ndarray  # K x s, orthonormal columns
    R: np.ndarray

    @property
    def s(self) -> int:
        return self.omegas.shape[1]


@dataclass(frozen=True)
class InflationFactor:
    """``W_i`` as a length ``i-1`` vector, with ``W_i^* = (h^_i^* w_i) c_i l_i``."""

    W: np.ndarray
    l: np.ndarray
    c: float

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.W) ** 2))


@dataclass(frozen=True)
class ConditionalMoments:
    D: float
    nr_bar: float
    M: np.ndarray


def build_plan(Hhat: np.ndarray, s: int) -> BeamformingPlan:
    """QR-based beamformers for the first ``s`` quantized directions."""
    K = Hhat.shape[0]
    if not 1 <= s <= K:
        raise InvalidArgumentError(f"s must be in [1, {K}], got {s}")
    Q, R = qr_factor(Hhat[:, :s])
    return BeamformingPlan(Q, R)


def distortion(cfg: SystemConfig) -> float:
    """Conditional mean quantization error ``D`` for the configuration."""
    if cfg.perfect_csit or cfg.K == 1:
        return 0.0
    return expected_distortion(QubModel(cfg.K, cfg.r))


def _d_over_km1(D: float, K: int) -> float:
    return 0.0 if D == 0.0 else D / (K - 1)


def conditional_outer_product(hhat: np.ndarray, D: float, K: int) -> np.ndarray:
    """``E[h~ h~^* | h^] = (1 - D - D/(K-1)) h^ h^* + D/(K-1) I``."""
    if not 0.0 <= D <= 1.0:
        raise InvalidArgumentError(f"D must lie in [0, 1], got {D}")
    if K < 2 and D > 0:
        raise InvalidArgumentError("K >= 2 needed for a non-zero distortion")
    hhat = np.asarray(hhat, dtype=complex).reshape(K)
    dk = _d_over_km1(D, K)
    return (1.0 - D - dk) * np.outer(hhat, hhat.conj()) + dk * np.eye(K)


def _check_user(plan: BeamformingPlan, i: int):
    if not 1 <= i <= plan.s:
        raise InvalidArgumentError(f"user index must be in [1, {plan.s}], got {i}")


def _l_vector(plan: BeamformingPlan, csit: QuantizedCsit, i: int) -> np.ndarray:
    return plan.omegas[:, :i - 1].conj().T @ csit.Hhat[:, i - 1]


def mean_noise_interference(cfg: SystemConfig, D: float) -> float:
    """``E[nr | H^] = 1 + (PK/s)(1-D) + P D K/(K-1) (s-1)/s``; the same for every user."""
    K, P, s = cfg.K, cfg.P, cfg.s
    return 1.0 + P * K / s * (1.0 - D) + P * K * _d_over_km1(D, K) * (s - 1) / s


def build_moments(plan: BeamformingPlan, csit: QuantizedCsit, cfg: SystemConfig, i: int,
                  D: Optional[float] = None) -> ConditionalMoments:
    _check_user(plan, i)
    if D is None:
        D = distortion(cfg)
    K, P, s = cfg.K, cfg.P, cfg.s
    dk = _d_over_km1(D, K)
    nr_bar = mean_noise_interference(cfg, D)
    l = _l_vector(plan, csit, i)
    M = ((nr_bar - P * K / s * dk) * np.eye(i - 1)
         - P * K / s * (1.0 - D - dk) * np.outer(l, l.conj()))
    return ConditionalMoments(D=D, nr_bar=nr_bar, M=M)


def _c_from_w(W: np.ndarray, l: np.ndarray, g: complex) -> float:
    # W^* = g c l  =>  c = <l, W^*> / (g ||l||^2)
    ll = float(np.vdot(l, l).real)
    if ll == 0.0 or g == 0:
        return 0.0
    return float((np.vdot(l, W.conj()) / (g * ll)).real)


def inflation_generic(moments: ConditionalMoments, plan: BeamformingPlan, csit: QuantizedCsit,
                      cfg: SystemConfig, i: int) -> InflationFactor:
    """Inflation factor from the conditional-moment definition.

    ``W_i = (P/s) E[w_i^* h h^* Omega_<i] M_i^{-1}``, where the numerator uses
    ``E[h h^*] = K E[h~ h~^*]`` (norm independent of direction) and solves
    against ``M_i`` rather than using its eigenstructure.
    """
    _check_user(plan, i)
    l = _l_vector(plan, csit, i)
    if i == 1:
        return InflationFactor(np.zeros(0, dtype=complex), l, 0.0)
    K, P, s = cfg.K, cfg.P, cfg.s
    w_i = plan.omegas[:, i - 1]
    prev = plan.omegas[:, :i - 1]
    hhat = csit.Hhat[:, i - 1]
    G = conditional_outer_product(hhat, moments.D, K)
    num = (P / s) * K * (w_i.conj() @ G @ prev)
    cond = np.linalg.cond(moments.M)
    if not cond <= _MAX_CONDITION:
        raise NumericDomainError(f"M_{i} is ill-conditioned (condition number {cond:.3g})")
    # W M = num  <=>  M^T W^T = num^T
    W = np.linalg.solve(moments.M.T, num)
    return InflationFactor(W, l, _c_from_w(W, l, np.vdot(hhat, w_i)))


def inflation_closed_form(plan: BeamformingPlan, csit: QuantizedCsit, cfg: SystemConfig, i: int,
                          D: Optional[float] = None, exact: bool = True) -> InflationFactor:
    """Inflation factor through the eigenvalue of ``M_i`` along ``l_i``.

    ``W_i = a (w_i^* h^_i) l_i^* / (1 + a |h^_i^* w_i|^2 + P D K/(K-1) (s-1)/s)``
    with ``a = (PK/s) b``. ``exact=False`` drops the ``(s-1)/s`` factor; both
    versions share the same large-K limit but only the exact one solves the
    finite-K linear system.
    """
    _check_user(plan, i)
    if D is None:
        D = distortion(cfg)
    K, P, s = cfg.K, cfg.P, cfg.s
    dk = _d_over_km1(D, K)
    l = _l_vector(plan, csit, i)
    if i == 1:
        return InflationFactor(np.zeros(0, dtype=complex), l, 0.0)
    g = np.vdot(csit.Hhat[:, i - 1], plan.omegas[:, i - 1])  # h^_i^* w_i
    a = P * K / s * (1.0 - D - dk)
    floor = P * K * dk * ((s - 1) / s if exact else 1.0)
    c = a / (1.0 + a * abs(g) ** 2 + floor)
    return InflationFactor(np.conj(g) * c * l.conj(), l, float(c))


def _conditional_draws(hhat: np.ndarray, cfg: SystemConfig, n: int, gen: np.random.Generator):
    if cfg.perfect_csit or cfg.K == 1:
        norm = np.sqrt(gen.gamma(cfg.K, 1.0, size=n))
        return norm[:, None] * hhat[None, :]
    return sample_conditional_channel(hhat, QubModel(cfg.K, cfg.r), gen, size=n)


def rate_terms(h: np.ndarray, plan: BeamformingPlan, cfg: SystemConfig, i: int,
               W: np.ndarray):
    """Per-draw ``(nr, denominator)`` of the rate expression for channel rows ``h``."""
    ps = cfg.P / cfg.s
    proj = np.atleast_2d(h).conj() @ plan.omegas  # h^* w_j
    nr = 1.0 + ps * np.sum(np.abs(proj) ** 2, axis=1)
    y = proj[:, i - 1] + proj[:, :i - 1] @ np.conj(W)
    den = nr * (1.0 + float(np.sum(np.abs(W) ** 2))) - ps * np.abs(y) ** 2
    return nr, den


def rate_user(plan: BeamformingPlan, csit: QuantizedCsit, cfg: SystemConfig, i: int,
              W: Union[InflationFactor, np.ndarray], n_inner: int, rng: RngLike) -> float:
    """Conditional achievable rate of user ``i`` (bits per channel use) for this ``H^``.

    Estimates ``E[log2(nr / (nr (1 + ||W||^2) - (P/s)|h^*(w_i + Omega_<i W^*)|^2)) | H^]``
    from ``n_inner`` conditional channel draws. Because the fixed ``W`` replaces
    the per-realization maximization, the value is an achievable lower bound.
    """
    _check_user(plan, i)
    if n_inner < 1:
        raise InvalidArgumentError(f"n_inner must be >= 1, got {n_inner}")
    if isinstance(W, InflationFactor):
        W = W.W
    W = np.asarray(W, dtype=complex).reshape(i - 1)
    gen = as_generator(rng)
    h = _conditional_draws(csit.Hhat[:, i - 1], cfg, n_inner, gen)
    nr, den = rate_terms(h, plan, cfg, i, W)
    if not np.all(den > 0):
        k = int(np.argmin(den))
        raise NumericDomainError(
            f"non-positive log argument for user {i}: nr={nr[k]!r}, denominator={den[k]!r}, "
            f"||W||^2={np.sum(np.abs(W) ** 2)!r}, cfg={cfg}")
    return float(np.mean(np.log2(nr / den)))


def realization_terms(H: np.ndarray, csit: QuantizedCsit, plan: BeamformingPlan,
                      cfg: SystemConfig, D: Optional[float] = None) -> dict:
    """Per-user quantities whose large-K limits are known, on the realized channel.

    Keys: ``gain`` (``|h^_i^* w_i|^2``), ``earlier`` and ``later`` (``1/s`` times
    the interference power from users before / after ``i``), ``nr``,
    ``x`` (``1 + ||W_i||^2``) and ``f`` (``1/s |h_i^*(w_i + Omega_<i W_i^*)|^2``).
    """
    if D is None:
        D = distortion(cfg)
    s = cfg.s
    Hon = H[:, :s]
    proj = Hon.conj().T @ plan.omegas  # row i: h_i^* w_j
    pw = np.abs(proj) ** 2
    G = csit.Hhat[:, :s].conj().T @ plan.omegas
    lower = np.tril(np.ones((s, s), dtype=bool), -1)
    out = {
        "gain": np.abs(np.diag(G)) ** 2,
        "earlier": np.sum(np.where(lower, pw, 0.0), axis=1) / s,
        "later": np.sum(np.where(lower.T, pw, 0.0), axis=1) / s,
        "nr": 1.0 + cfg.P / s * np.sum(pw, axis=1),
    }
    x = np.empty(s)
    f = np.empty(s)
    for i in range(1, s + 1):
        W = inflation_closed_form(plan, csit, cfg, i, D).W
        x[i - 1] = 1.0 + np.sum(np.abs(W) ** 2)
        y = proj[i - 1, i - 1] + proj[i - 1, :i - 1] @ W.conj()
        f[i - 1] = abs(y) ** 2 / s
    out["x"] = x
    out["f"] = f
    return out


def trial(cfg: SystemConfig, n_inner: int, gen: np.random.Generator,
          exact: bool = True) -> TrialResult:
    """One outer realization: channel, feedback, beamformers, then every active user's rate."""
    channel = sample_channel(cfg, gen)
    if cfg.perfect_csit or cfg.K == 1:
        csit = perfect_csit(channel)
    else:
        csit = quantize_channel(channel, QubModel(cfg.K, cfg.r), gen)
    plan = build_plan(csit.Hhat, cfg.s)
    D = distortion(cfg)
    rates = np.empty(cfg.s)
    for i in range(1, cfg.s + 1):
        W = inflation_closed_form(plan, csit, cfg, i, D, exact=exact)
        rates[i - 1] = rate_user(plan, csit, cfg, i, W, n_inner, gen)
    # leakage from later users onto the realized channel, zero under perfect CSIT
    Hon = channel.H[:, :cfg.s]
    pw = np.abs(Hon.conj().T @ plan.omegas) ** 2
    leak = float(np.max(np.sum(np.triu(pw, 1), axis=1)))
    return TrialResult(throughput=math.fsum(rates) / cfg.K, per_user=rates, interference=leak)


def throughput_mc(cfg: SystemConfig, n_outer: int = 500, n_inner: int = 200, seed: int = 42,
                  workers: int = 1, exact: bool = True) -> ThroughputEstimate:
    """Monte Carlo ZFDPC throughput ``(1/K) sum_i R_i`` over ``n_outer`` realizations."""
    if n_outer < 1 or n_inner < 1:
        raise InvalidArgumentError("n_outer and n_inner must be >= 1")
    return estimate(lambda gen: trial(cfg, n_inner, gen, exact=exact), n_outer, seed, workers)
