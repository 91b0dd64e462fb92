"""Numerical building blocks: seeded complex Gaussian sampling, Householder QR
with a fixed sign convention, and adaptive Simpson quadrature on [0, 1].
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError, SingularMatrixError

_MASK64 = (1 << 64) - 1


@dataclass
class RngStream:
    """Counter-based random stream identified by ``(seed, stream_id)``.

    The pair is used verbatim as the 128-bit Philox key, so two streams with the
    same pair replay the same draws and streams with different ids are
    independent. Monte Carlo drivers give each trial its own ``stream_id``,
    which makes results independent of execution order.
    """

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidArgumentError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def sample_complex_gaussian(n: int, rng: RngLike, size: Optional[int] = None) -> np.ndarray:
    """Draw i.i.d. CN(0, 1) entries (real and imaginary parts each of variance 1/2).

    Returns a vector of length ``n``, or an array of shape ``(size, n)`` when
    ``size`` is given.
    """
    if n < 1:
        raise InvalidArgumentError(f"vector length must be >= 1, got {n}")
    gen = as_generator(rng)
    shape = (n,) if size is None else (size, n)
    z = gen.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)


def qr_factor(A: np.ndarray, rank_tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Householder QR of an ``m x n`` matrix with ``m >= n``.

    Returns the thin factors ``Q`` (``m x n``, orthonormal columns) and ``R``
    (``n x n``, upper triangular) with ``A = Q @ R``. The diagonal of ``R`` is
    real and non-negative, which makes ``Q`` a deterministic function of ``A``.

    Raises
    ------
    SingularMatrixError
        If the smallest diagonal magnitude of ``R`` is at most ``rank_tol``
        times the largest.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise InvalidArgumentError("qr_factor expects a 2-D array")
    m, n = A.shape
    if n == 0 or m < n:
        raise InvalidArgumentError(f"qr_factor needs m >= n >= 1, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericDomainError("matrix has non-finite entries")

    R = A.copy()
    Q = np.eye(m, dtype=complex)
    for k in range(n):
        x = R[k:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2.0 * np.outer(v, v.conj() @ R[k:, k:])
        Q[:, k:] -= 2.0 * np.outer(Q[:, k:] @ v, v.conj())
        R[k + 1:, k] = 0.0

    Q = Q[:, :n]
    R = R[:n, :]
    d = np.diag(R).copy()
    mag = np.abs(d)
    if mag.max() == 0.0 or mag.min() <= rank_tol * mag.max():
        raise SingularMatrixError("matrix is numerically rank deficient")
    ph = d / mag
    R = ph.conj()[:, None] * R
    Q = Q * ph[None, :]
    R[np.diag_indices(n)] = mag
    return Q, np.triu(R)


def integrate_01(f: Callable[[float], float], tol: float = 1e-8,
                 min_depth: int = 3, max_depth: int = 50) -> float:
    """Integrate ``f`` over [0, 1] by adaptive Simpson with Richardson correction.

    An interval is accepted when the two-panel and one-panel Simpson estimates
    differ by at most ``15 * local_tol``; the tolerance is halved with each
    bisection so the accepted local errors add up to at most ``tol``. The first
    ``min_depth`` levels are always bisected, guarding against a lucky match of
    the coarse estimates.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")

    def ev(x):
        y = float(f(x))
        if not math.isfinite(y):
            raise NumericDomainError(f"integrand is not finite at x={x!r}: {y!r}")
        return y

    f0, fm, f1 = ev(0.0), ev(0.5), ev(1.0)
    whole = (f0 + 4.0 * fm + f1) / 6.0
    pieces = []
    stack = [(0.0, 1.0, f0, fm, f1, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, s, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        h = b - a
        flm = ev(0.5 * (a + m))
        frm = ev(0.5 * (m + b))
        left = h * (fa + 4.0 * flm + fm) / 12.0
        right = h * (fm + 4.0 * frm + fb) / 12.0
        delta = left + right - s
        if (depth >= min_depth and abs(delta) <= 15.0 * eps) or depth >= max_depth:
            pieces.append(left + right + delta / 15.0)
        else:
            stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
            stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
    return math.fsum(pieces)
