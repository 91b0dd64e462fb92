"""Large-system ZFDPC throughput as K grows with ``s/K -> sbar`` and ``r/K -> rbar``.

``ibar`` in ``[0, 1]`` is the normalized encoding position ``i/s``. All
functions return values in bits unless stated otherwise.
"""

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError, NumericDomainError
from .numerics import integrate_01

LN2 = math.log(2.0)


@dataclass(frozen=True)
class AsymptoticParams:
    P: float
    sbar: float
    rbar: float

    def __post_init__(self):
        if not (self.P >= 0 and math.isfinite(self.P)):
            raise InvalidArgumentError(f"P must be finite and >= 0, got {self.P}")
        if not 0.0 < self.sbar <= 1.0:
            raise InvalidArgumentError(f"sbar must lie in (0, 1], got {self.sbar}")
        if not self.rbar >= 0:
            raise InvalidArgumentError(f"rbar must be >= 0, got {self.rbar}")

    @property
    def Dbar(self) -> float:
        """Limiting quantization error ``2^-rbar``."""
        return 2.0 ** (-self.rbar)

    @property
    def signal(self) -> float:
        """``(P/sbar)(1 - Dbar)``, the per-user coherent gain scale."""
        return self.P / self.sbar * (1.0 - self.Dbar)

    @property
    def NR(self) -> float:
        """Limit of the noise-plus-total-received-power term ``nr``."""
        return 1.0 + self.signal + self.P * self.Dbar


def _check_ibar(ibar):
    if not 0.0 <= ibar <= 1.0:
        raise InvalidArgumentError(f"ibar must lie in [0, 1], got {ibar}")


def _cap_denominator(ibar: float, p: AsymptoticParams) -> float:
    return 1.0 + p.P * p.Dbar + p.signal * (1.0 - ibar * p.sbar)


def x_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of ``1 + ||W_i||^2``."""
    _check_ibar(ibar)
    t = ibar * p.sbar
    c = p.signal / _cap_denominator(ibar, p)  # squared after the division so huge P cannot overflow
    return 1.0 + c * c * (1.0 - t) * t


def c_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of the inflation scalar ``c_i``."""
    _check_ibar(ibar)
    return p.signal / _cap_denominator(ibar, p)


def f_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of the DPC-combined useful signal power ``f_i``."""
    _check_ibar(ibar)
    t = ibar * p.sbar
    return (1.0 - p.Dbar) * (1.0 - t) * (c_inf(ibar, p) * t + 1.0) ** 2 / p.sbar


def gain_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of ``|h^_i^* w_i|^2``."""
    return 1.0 - ibar * p.sbar


def earlier_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of ``(1/s) sum_{j<i} |h_i^* w_j|^2``."""
    return ibar


def later_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limit of ``(1/s) sum_{k>i} |h_i^* w_k|^2``."""
    return p.Dbar * (1.0 - ibar)


def log_argument(ibar: float, p: AsymptoticParams) -> float:
    """``NR x^inf - P f^inf``: the limiting denominator of the per-user rate."""
    return p.NR * x_inf(ibar, p) - p.P * f_inf(ibar, p)


def rate_inf(ibar: float, p: AsymptoticParams) -> float:
    """Limiting rate (bits) of the user at normalized position ``ibar``."""
    arg = log_argument(ibar, p)
    if not arg > 0:
        raise NumericDomainError(f"non-positive log argument {arg!r} at ibar={ibar}, {p}")
    return math.log2(p.NR) - math.log2(arg)


def rho(p: AsymptoticParams, tol: float = 1e-8) -> float:
    """Asymptotic throughput in bits per channel use per antenna.

    ``sbar * (log2 NR - int_0^1 log2(NR x^inf - P f^inf) d ibar)``.
    """
    if p.P == 0.0:
        return 0.0
    log_nr = math.log2(p.NR)

    def integrand(ibar):
        arg = log_argument(ibar, p)
        if not arg > 0:
            raise NumericDomainError(f"non-positive log argument {arg!r} at ibar={ibar}, {p}")
        return math.log2(arg)

    # integrating the rate directly keeps the absolute error relative to the result
    return p.sbar * integrate_01(lambda x: log_nr - integrand(x), tol / p.sbar)


def rho_perfect(P: float, sbar: float, tol: float = 1e-8) -> float:
    """Perfect-CSIT throughput ``sbar * int_0^1 log2(1 + P (1 - ibar sbar)/sbar) d ibar``."""
    if not (P >= 0 and math.isfinite(P)):
        raise InvalidArgumentError(f"P must be finite and >= 0, got {P}")
    if not 0.0 < sbar <= 1.0:
        raise InvalidArgumentError(f"sbar must lie in (0, 1], got {sbar}")
    if P == 0.0:
        return 0.0
    return sbar * integrate_01(lambda x: math.log2(1.0 + P * (1.0 - x * sbar) / sbar), tol / sbar)


def rho_at(P: float, sbar: float, rbar: float, tol: float = 1e-8) -> float:
    """Convenience wrapper; ``sbar = 0`` (nobody served) gives 0."""
    if sbar == 0.0:
        return 0.0
    return rho(AsymptoticParams(P, sbar, rbar), tol)


def to_nats(bits: float) -> float:
    return bits * LN2
