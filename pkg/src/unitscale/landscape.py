"""Gradient of the potential over the diagonal phases, and stationary points.

With ``B_jk = exp(i(lambda_j + rho_k)) A_jk`` the potential
``n**2 - |sum(B)|**2`` is a function of the 2n phases. At zero phases its
partial derivatives are

    d/d lambda_j = 2 (p t_j - q s_j),    d/d rho_j = 2 (p e_j - q d_j),

where ``r_j = s_j + i t_j`` are the row sums, ``c_j = d_j + i e_j`` the
column sums and ``m = p + i q`` the matrix sum of ``A``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import as_matrix, line_sums, potential

__all__ = [
    "LandscapeGradient",
    "StationaryClass",
    "gradient",
    "finite_difference_gradient",
    "classify_stationary",
    "potential_at",
]

STATIONARY_TOL = 1e-8


@dataclass(frozen=True)
class LandscapeGradient:
    dlambda: np.ndarray
    drho: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.dlambda, self.drho])

    def max_abs(self) -> float:
        return float(np.abs(self.as_vector()).max())


class StationaryClass(enum.Enum):
    NOT_STATIONARY = "NotStationary"
    GLOBAL_MAX_ZERO_SUM = "GlobalMaxZeroSum"
    CONSTANT_ARGUMENT_LINE_SUMS = "ConstantArgumentLineSums"


def gradient(A) -> LandscapeGradient:
    s = line_sums(A)
    p, q = s.matrix_sum.real, s.matrix_sum.imag
    dlambda = 2.0 * (p * s.rows.imag - q * s.rows.real)
    drho = 2.0 * (p * s.cols.imag - q * s.cols.real)
    return LandscapeGradient(dlambda=dlambda, drho=drho)


def potential_at(A, lam, rho) -> float:
    """Potential of ``diag(e^{i lam}) A diag(e^{i rho})``."""
    A = np.asarray(A)
    return potential(np.exp(1j * np.asarray(lam))[:, None] * A * np.exp(1j * np.asarray(rho))[None, :])


def finite_difference_gradient(A, h: float = 1e-6) -> LandscapeGradient:
    """Central differences of :func:`potential_at` around zero phases."""
    A = as_matrix(A)
    n = A.shape[0]
    g = np.empty(2 * n)
    z = np.zeros(n)
    for idx in range(2 * n):
        e = np.zeros(2 * n)
        e[idx] = h
        plus = potential_at(A, z + e[:n], z + e[n:])
        minus = potential_at(A, z - e[:n], z - e[n:])
        g[idx] = (plus - minus) / (2 * h)
    return LandscapeGradient(dlambda=g[:n], drho=g[n:])


def classify_stationary(A, tol: float = STATIONARY_TOL) -> StationaryClass:
    """Classify ``A`` as a point of the potential landscape over its double coset.

    A vanishing gradient means either a zero matrix sum (the global maximum
    ``n**2``) or, since each component is ``2 Im(conj(m) * line_sum)`` up to
    sign, every nonzero line sum sharing the argument of ``m``. The cases of
    all line sums real, all imaginary, or all in a common ratio are instances
    of the latter.
    """
    A = as_matrix(A)
    if gradient(A).max_abs() > tol:
        return StationaryClass.NOT_STATIONARY
    if abs(line_sums(A).matrix_sum) < tol:
        return StationaryClass.GLOBAL_MAX_ZERO_SUM
    return StationaryClass.CONSTANT_ARGUMENT_LINE_SUMS
