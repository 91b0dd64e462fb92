"""Exception types shared across the package."""

import numpy as np


class InvalidArgumentError(ValueError):
    """A precondition on an argument was violated."""


class SingularMatrixError(np.linalg.LinAlgError):
    """A factorization or solve hit a (numerically) rank-deficient matrix."""


class NumericDomainError(ArithmeticError):
    """A computation left its numeric domain (non-finite value, log of a non-positive number)."""
