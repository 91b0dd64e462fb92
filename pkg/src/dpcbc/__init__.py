"""Throughput of the finite-rate-feedback Gaussian broadcast channel under
zeroforcing dirty-paper coding: large-system formulas, finite-K Monte Carlo,
and selection of the number of served users."""

__version__ = "0.1.0"

from .asymptotic import AsymptoticParams, c_inf, f_inf, rho, rho_perfect, x_inf
from .channel import ChannelRealization, SystemConfig, sample_channel
from .errors import InvalidArgumentError, NumericDomainError, SingularMatrixError
from .montecarlo import ThroughputEstimate
from .numerics import RngStream, integrate_01, qr_factor, sample_complex_gaussian
from .quantization import (QuantizedCsit, QubModel, expected_distortion, quantize_channel,
                           quantize_explicit, sample_conditional_channel)
from .selection import s_opt_finite, sbar_opt
from .zfbf import zfbf_throughput_mc, zfbf_vectors
from .zfdpc import (BeamformingPlan, ConditionalMoments, InflationFactor, build_moments, build_plan,
                    conditional_outer_product, inflation_closed_form, inflation_generic, rate_user,
                    throughput_mc)

__all__ = [
    "AsymptoticParams", "BeamformingPlan", "ChannelRealization", "ConditionalMoments",
    "InflationFactor", "InvalidArgumentError", "NumericDomainError", "QuantizedCsit", "QubModel",
    "RngStream", "SingularMatrixError", "SystemConfig", "ThroughputEstimate", "build_moments",
    "build_plan", "c_inf", "conditional_outer_product", "expected_distortion", "f_inf",
    "inflation_closed_form", "inflation_generic", "integrate_01", "qr_factor", "quantize_channel",
    "quantize_explicit", "rate_user", "rho", "rho_perfect", "s_opt_finite", "sample_channel",
    "sample_complex_gaussian", "sample_conditional_channel", "sbar_opt", "throughput_mc", "x_inf",
    "zfbf_throughput_mc", "zfbf_vectors",
]
