import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dpcbc.errors import InvalidArgumentError, NumericDomainError, SingularMatrixError
from dpcbc.numerics import RngStream, integrate_01, qr_factor, sample_complex_gaussian


def test_complex_gaussian_squared_norm_mean():
    h = sample_complex_gaussian(4, RngStream(11), size=100_000)
    m = np.mean(np.sum(np.abs(h) ** 2, axis=1))
    assert abs(m - 4.0) <= 0.05


def test_complex_gaussian_deterministic_per_stream():
    a = sample_complex_gaussian(1, RngStream(5, 3))
    b = sample_complex_gaussian(1, RngStream(5, 3))
    c = sample_complex_gaussian(1, RngStream(5, 4))
    assert a == b
    assert a != c


def test_complex_gaussian_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        sample_complex_gaussian(0, RngStream(1))


def test_complex_gaussian_covariance():
    n, N = 3, 100_000
    h = sample_complex_gaussian(n, RngStream(2), size=N)
    x = np.concatenate([h.real, h.imag], axis=1)
    prods = x[:, :, None] * x[:, None, :]
    cov = prods.mean(axis=0)
    se = prods.std(axis=0) / math.sqrt(N)
    assert np.all(np.abs(cov - 0.5 * np.eye(2 * n)) <= 3 * se)


def test_generator_passthrough():
    g = np.random.default_rng(0)
    assert sample_complex_gaussian(3, g).shape == (3,)


def test_qr_identity():
    Q, R = qr_factor(np.eye(5))
    assert np.allclose(Q, np.eye(5), atol=1e-15)
    assert np.allclose(R, np.eye(5), atol=1e-15)


def test_qr_random_8x8_reconstruction():
    A = sample_complex_gaussian(8, RngStream(3), size=8)
    Q, R = qr_factor(A)
    assert np.max(np.abs(Q.conj().T @ Q - np.eye(8))) <= 1e-10
    assert np.max(np.abs(Q @ R - A)) <= 1e-10


def test_qr_duplicated_column_is_singular():
    A = sample_complex_gaussian(4, RngStream(4), size=4)
    A[:, 2] = A[:, 1]
    with pytest.raises(SingularMatrixError):
        qr_factor(A)


def test_qr_unitarity_and_structure_many_inputs():
    rng = RngStream(6)
    worst = 0.0
    for _ in range(1000):
        A = sample_complex_gaussian(16, rng, size=16)
        Q, R = qr_factor(A)
        worst = max(worst, np.max(np.abs(Q.conj().T @ Q - np.eye(16))))
        assert np.all(np.tril(R, -1) == 0)
        d = np.diag(R)
        assert np.all(d.imag == 0) and np.all(d.real >= 0)
    assert worst <= 1e-10


def test_qr_matches_lapack_up_to_column_phases():
    A = sample_complex_gaussian(12, RngStream(7), size=12)
    Q, R = qr_factor(A)
    Q2, R2 = np.linalg.qr(A)
    ph = np.diag(R2) / np.abs(np.diag(R2))
    assert np.allclose(Q, Q2 * ph[None, :], atol=1e-12)


def test_qr_tall_thin():
    A = sample_complex_gaussian(9, RngStream(8), size=4).T
    Q, R = qr_factor(A)
    assert Q.shape == (9, 4) and R.shape == (4, 4)
    assert np.allclose(Q @ R, A, atol=1e-12)


@pytest.mark.parametrize("f, exact", [
    (lambda x: 1.0, 1.0),
    (lambda x: x * x, 1.0 / 3.0),
    (lambda x: math.log2(1 + 10 * (1 - x)), (11 * math.log(11) - 10) / (10 * math.log(2))),
    (math.exp, math.e - 1.0),
    (lambda x: math.sin(math.pi * x), 2.0 / math.pi),
    (lambda x: 1.0 / (1.0 + x * x), math.pi / 4.0),
    (lambda x: math.sqrt(1.0 + x), (2.0 / 3.0) * (2 ** 1.5 - 1.0)),
    (lambda x: x ** 7 - 3 * x ** 4, 1.0 / 8.0 - 3.0 / 5.0),
])
@pytest.mark.parametrize("tol", [1e-6, 1e-8, 1e-11])
def test_integrate_01_known_antiderivatives(f, exact, tol):
    assert abs(integrate_01(f, tol) - exact) <= tol


def test_integrate_01_constant_exact():
    assert integrate_01(lambda x: 1.0) == 1.0


def test_integrate_01_nonfinite():
    with pytest.raises(NumericDomainError):
        integrate_01(lambda x: math.inf if x > 0.3 else 0.0)


def test_integrate_01_bad_tol():
    with pytest.raises(InvalidArgumentError):
        integrate_01(lambda x: x, 0.0)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.1, 50.0), tol=st.sampled_from([1e-6, 1e-8]))
def test_integrate_01_log_family(a, tol):
    exact = ((1 + a) * (math.log(1 + a) - 1) + 1) / (a * math.log(2))
    assert abs(integrate_01(lambda x: math.log2(1 + a * (1 - x)), tol) - exact) <= tol
