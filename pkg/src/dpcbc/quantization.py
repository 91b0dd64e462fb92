"""Finite-rate feedback of channel directions under the quantization-cell
upper-bound (QUB) model.

Each user feeds back ``r`` bits describing ``h_i / ||h_i||``. Under QUB the
Voronoi cell of every codeword is an ideal spherical cap covering a ``2^-r``
fraction of the unit sphere in ``C^K``. The quantization error
``d^2 = sin^2(angle(h~, h^))`` then has CDF ``2^r x^(K-1)`` on
``[0, 2^(-r/(K-1))]``, and the direction decomposes as

    h~ = sqrt(1 - d^2) h^ + sqrt(d^2) e~

with ``e~`` isotropic in the orthogonal complement of ``h^`` and independent of
``d^2``. For the feedback rates of interest (``r`` proportional to ``K``)
explicit codebooks have ``2^r`` entries, so the simulator samples this
geometry directly; :func:`quantize_explicit` exists for small-instance checks.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelRealization
from .errors import InvalidArgumentError
from .numerics import RngLike, as_generator, sample_complex_gaussian


@dataclass(frozen=True)
class QubModel:
    K: int
    r: float

    def __post_init__(self):
        if self.K < 2:
            raise InvalidArgumentError(f"QUB model needs K >= 2 (no perpendicular space), got K={self.K}")
        if not self.r >= 0:
            raise InvalidArgumentError(f"r must be >= 0, got {self.r}")

    @property
    def delta(self) -> float:
        """Largest possible quantization error (cap boundary), ``2^(-r/(K-1))``."""
        return 2.0 ** (-self.r / (self.K - 1))

    def sample_d2(self, rng: RngLike, size: Optional[int] = None):
        """Inverse-transform draw of ``d^2``: ``delta * U^(1/(K-1))``."""
        u = as_generator(rng).random(size)
        return self.delta * u ** (1.0 / (self.K - 1))


def expected_distortion(model: QubModel) -> float:
    """Mean QUB quantization error ``D = (K-1)/K * 2^(-r/(K-1))``."""
    return (model.K - 1) / model.K * model.delta


@dataclass(frozen=True)
class QuantizedCsit:
    """Quantized channel directions fed back to the transmitter.

    ``Hhat`` holds the unit-norm quantized directions as columns; ``dc2``,
    ``edir`` (columns) and ``channel_norms`` complete the per-user
    decomposition of the true channel. Only ``Hhat`` is known to the
    transmitter; the rest is kept for diagnostics and limit checks.
    """

    Hhat: np.ndarray
    dc2: np.ndarray
    edir: np.ndarray
    channel_norms: np.ndarray

    @property
    def K(self) -> int:
        return self.Hhat.shape[0]

    def directions(self) -> np.ndarray:
        """Reconstructed true directions ``h~_i`` (columns)."""
        return (np.sqrt(1.0 - self.dc2)[None, :] * self.Hhat
                + np.sqrt(self.dc2)[None, :] * self.edir)

    def channel(self) -> np.ndarray:
        """Reconstructed channel matrix ``H``."""
        return self.directions() * np.sqrt(self.channel_norms)[None, :]


def _unit_perpendicular(u: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Project the rows of ``g`` off the matching rows of unit vectors ``u`` and normalize."""
    g = g - np.sum(u.conj() * g, axis=-1, keepdims=True) * u
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def quantize_channel(channel: ChannelRealization, model: QubModel, rng: RngLike) -> QuantizedCsit:
    """Sample the QUB quantization outcome for every user of ``channel``.

    For each direction ``h~`` a cap error ``d^2`` and an isotropic unit vector
    ``g`` orthogonal to ``h~`` are drawn; then ``h^ = sqrt(1-d^2) h~ + sqrt(d^2) g``
    and ``e~ = sqrt(d^2) h~ - sqrt(1-d^2) g``, which is the rotation of the
    sampled cap geometry onto ``h~``. ``h^`` is isotropic because ``h~`` is, and
    the decomposition of ``h~`` in terms of ``(h^, d^2, e~)`` holds exactly.
    """
    H = channel.H
    K = H.shape[0]
    if K != model.K:
        raise InvalidArgumentError(f"channel has K={K} but model has K={model.K}")
    norms2 = channel.norms2
    htil = (H / np.sqrt(norms2)[None, :]).T  # one row per user
    d2 = model.sample_d2(rng, size=K)
    g = _unit_perpendicular(htil, sample_complex_gaussian(K, rng, size=K))
    a = np.sqrt(1.0 - d2)[:, None]
    b = np.sqrt(d2)[:, None]
    hhat = a * htil + b * g
    edir = b * htil - a * g
    return QuantizedCsit(Hhat=np.ascontiguousarray(hhat.T), dc2=d2,
                         edir=np.ascontiguousarray(edir.T), channel_norms=norms2)


def perfect_csit(channel: ChannelRealization) -> QuantizedCsit:
    """Error-free feedback: ``h^_i = h~_i`` and ``d^2 = 0``.

    The error directions carry zero weight; they are set deterministically so
    the result satisfies the same invariants as a quantized one.
    """
    K = channel.K
    htil = channel.directions.T
    if K == 1:
        edir = np.zeros_like(htil)
    else:
        seed = np.zeros_like(htil)
        seed[np.arange(K), np.argmin(np.abs(htil), axis=1)] = 1.0
        edir = _unit_perpendicular(htil, seed)
    return QuantizedCsit(Hhat=np.ascontiguousarray(htil.T), dc2=np.zeros(K),
                         edir=np.ascontiguousarray(edir.T), channel_norms=channel.norms2)


def quantize_explicit(h: np.ndarray, codebook: Sequence[np.ndarray]) -> Tuple[int, float]:
    """Nearest-codeword quantization by minimum ``sin^2`` of the angle.

    Returns ``(index, d2)`` where ``d2 = 1 - |h~^* q_index|^2``.
    """
    C = np.asarray(codebook, dtype=complex)
    if C.size == 0:
        raise InvalidArgumentError("codebook is empty")
    if C.ndim == 1:
        C = C[None, :]
    h = np.asarray(h, dtype=complex)
    htil = h / np.linalg.norm(h)
    corr = np.abs(C.conj() @ htil) ** 2
    idx = int(np.argmax(corr))
    return idx, float(max(0.0, 1.0 - corr[idx]))


def random_codebook(K: int, r: int, rng: RngLike) -> np.ndarray:
    """``2^r`` isotropic unit vectors in ``C^K`` (rows), a member of the rotated ensemble."""
    if r < 0 or int(r) != r:
        raise InvalidArgumentError(f"explicit codebooks need an integer r >= 0, got {r}")
    C = sample_complex_gaussian(K, rng, size=2 ** int(r))
    return C / np.linalg.norm(C, axis=1, keepdims=True)


def sample_conditional_channel(hhat: np.ndarray, model: QubModel, rng: RngLike,
                               size: Optional[int] = None) -> np.ndarray:
    """Draw channels ``h`` consistent with quantized direction ``hhat``.

    ``||h||^2`` is Gamma(K, 1) (chi-square with mean K), ``d^2`` follows the
    cap law and ``e~`` is isotropic in the complement of ``hhat``. Returns a
    vector of length K, or ``(size, K)`` rows when ``size`` is given.
    """
    K = model.K
    hhat = np.asarray(hhat, dtype=complex)
    n = 1 if size is None else size
    gen = as_generator(rng)
    norm = np.sqrt(gen.gamma(K, 1.0, size=n))
    d2 = model.sample_d2(gen, size=n)
    e = _unit_perpendicular(hhat[None, :], sample_complex_gaussian(K, gen, size=n))
    h = norm[:, None] * (np.sqrt(1.0 - d2)[:, None] * hhat[None, :] + np.sqrt(d2)[:, None] * e)
    return h[0] if size is None else h
