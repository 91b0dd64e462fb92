"""Choosing how many users to serve."""

import math
from typing import Tuple

import numpy as np

from .asymptotic import AsymptoticParams, rho
from .errors import InvalidArgumentError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
GRID_STEP = 0.01
TIE_TOL = 1e-10


def _rho_s(P: float, rbar: float, sbar: float, quad_tol: float) -> float:
    return rho(AsymptoticParams(P, sbar, rbar), quad_tol)


def sbar_opt(P: float, rbar: float, tol: float = 1e-4, quad_tol: float = 1e-10) -> Tuple[float, float]:
    """Fraction of users maximizing the asymptotic throughput.

    A coarse grid over ``(0, 1]`` (step 0.01) picks the best cell, preferring the
    larger fraction on ties, and golden-section search refines it to ``tol``.
    Unimodality in ``sbar`` is not known, so the refined point is only kept if
    it does at least as well as the best grid point.

    Returns ``(sbar_opt, rho_opt)`` with ``rho_opt`` in bits.
    """
    if not P > 0:
        raise InvalidArgumentError(f"P must be > 0, got {P}")
    if not rbar > 0:
        raise InvalidArgumentError(f"rbar must be > 0, got {rbar}")
    n = int(round(1.0 / GRID_STEP))
    grid = np.arange(1, n + 1) * GRID_STEP
    grid[-1] = 1.0
    vals = np.array([_rho_s(P, rbar, g, quad_tol) for g in grid])
    best = vals.max()
    k = int(np.nonzero(vals >= best - TIE_TOL)[0].max())
    s_best, v_best = float(grid[k]), float(vals[k])

    lo = max(GRID_STEP * 1e-3, s_best - GRID_STEP)
    hi = min(1.0, s_best + GRID_STEP)
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = _rho_s(P, rbar, c, quad_tol), _rho_s(P, rbar, d, quad_tol)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _rho_s(P, rbar, c, quad_tol)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _rho_s(P, rbar, d, quad_tol)
    cand = [(s_best, v_best)]
    mid = 0.5 * (a + b)
    cand.append((mid, _rho_s(P, rbar, mid, quad_tol)))
    if hi == 1.0:
        cand.append((1.0, _rho_s(P, rbar, 1.0, quad_tol)))
    top = max(v for _, v in cand)
    s, v = max((sv for sv in cand if sv[1] >= top - TIE_TOL), key=lambda sv: sv[0])
    return s, v


def round_users(sbar: float, K: int) -> int:
    """``sbar K`` rounded half up to an integer in ``[1, K]``."""
    return int(min(K, max(1, math.floor(sbar * K + 0.5))))


def s_opt_finite(K: int, r: float, P: float, tol: float = 1e-4) -> int:
    """Number of users for a size-``K`` system: ``round(sbar_opt(P, r/K) K)`` clamped to ``[1, K]``."""
    if K < 1:
        raise InvalidArgumentError(f"K must be >= 1, got {K}")
    if not r >= 0:
        raise InvalidArgumentError(f"r must be >= 0, got {r}")
    if K == 1:
        return 1
    if P <= 0 or r == 0:
        # no throughput to gain from anyone; serving one user is as good as any
        return 1
    sb, _ = sbar_opt(P, r / K, tol)
    return round_users(sb, K)
