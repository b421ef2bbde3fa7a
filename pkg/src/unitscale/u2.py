"""Closed-form theory of the 2x2 case.

Every U(2) matrix is written as

    U(phi, theta, psi, chi) = e^{i theta} [[ c e^{i psi},   s e^{i chi}  ],
                                           [-s e^{-i chi},  c e^{-i psi} ]]

with ``c = cos(phi)``, ``s = sin(phi)``. Left and right multiplication by
diagonal unitaries leaves ``phi`` unchanged, so ``phi`` labels the double
coset. Within a coset the scaled matrices are ``B = negator(phi)`` and
``B' = negator(-phi)``; which one the iteration reaches is decided by the
sign of ``chi - psi``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import DiagonalPhase, as_matrix, checked_unitary, wrap_angle
from .scaler import INPUT_UNITARITY_TOL
from .zxz import ZXZDecomposition, negator

__all__ = [
    "U2Params",
    "Branch",
    "Attractor",
    "WrongDimension",
    "DegenerateCoset",
    "u2_params",
    "u2_from_params",
    "u2_analytic_zxz",
    "u2_predict_attractor",
    "attractor_matrix",
    "u2_convergence_ratio",
    "real_line_sum_points",
    "named_points",
]

# below this |U12| the angle chi carries no information
_POLE_TOL = 1e-14


class WrongDimension(ValueError):
    pass


class DegenerateCoset(ValueError):
    pass


class Branch(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class Attractor(enum.Enum):
    B = "B"
    BPRIME = "Bprime"
    SEPARATRIX = "Separatrix"


@dataclass(frozen=True)
class U2Params:
    phi: float
    theta: float
    psi: float
    chi: float

    def matrix(self) -> np.ndarray:
        return u2_from_params(self)


def u2_from_params(p: U2Params) -> np.ndarray:
    c, s = np.cos(p.phi), np.sin(p.phi)
    return np.exp(1j * p.theta) * np.array(
        [
            [c * np.exp(1j * p.psi), s * np.exp(1j * p.chi)],
            [-s * np.exp(-1j * p.chi), c * np.exp(-1j * p.psi)],
        ],
        dtype=np.complex128,
    )


def _check_u2(U) -> np.ndarray:
    A = as_matrix(U)
    if A.shape != (2, 2):
        raise WrongDimension(f"expected a 2x2 matrix, got {A.shape}")
    return checked_unitary(A, INPUT_UNITARITY_TOL)


def u2_params(U) -> U2Params:
    """Coordinates ``(phi, theta, psi, chi)`` of a 2x2 unitary.

    ``theta`` is half the principal argument of ``det U``; with that choice
    the remaining angles follow from the first row alone. On the poles of the
    parametrization (``phi`` of 0 or pi/2) the undetermined angle is set to 0.
    """
    A = _check_u2(U)
    a, b = abs(A[0, 0]), abs(A[0, 1])
    phi = float(np.arctan2(b, a))
    theta = float(np.angle(np.linalg.det(A))) / 2.0
    psi = wrap_angle(np.angle(A[0, 0]) - theta) if a > _POLE_TOL else 0.0
    chi = wrap_angle(np.angle(A[0, 1]) - theta) if b > _POLE_TOL else 0.0
    return U2Params(phi=phi, theta=theta, psi=psi, chi=chi)


def u2_analytic_zxz(U, branch: Branch = Branch.FIRST) -> ZXZDecomposition:
    """Exact ``e^{i alpha} Z1 X Z2`` factorization of a 2x2 unitary.

    ``Branch.FIRST`` gives ``X = negator(phi)`` and
    ``alpha = theta + phi + psi``; ``Branch.SECOND`` gives ``X = negator(-phi)``
    and ``alpha = theta - phi + psi``.
    """
    p = u2_params(U)
    sign = 1.0 if Branch(branch) is Branch.FIRST else -1.0
    # Z1 = diag(1, +-i e^{-i(psi+chi)}), Z2 = diag(1, -+i e^{i(chi-psi)})
    z1 = sign * np.pi / 2 - p.psi - p.chi
    z2 = -sign * np.pi / 2 + p.chi - p.psi
    if p.phi == 0.0:
        # X is the identity and commutes with Z2; fold it into Z1
        z1, z2 = z1 + z2, 0.0
    return ZXZDecomposition(
        alpha=wrap_angle(p.theta + sign * p.phi + p.psi),
        Z1=DiagonalPhase([0.0, z1]),
        X=negator(sign * p.phi),
        Z2=DiagonalPhase([0.0, z2]),
    )


def u2_predict_attractor(U, tol: float = 1e-9) -> Attractor:
    """Which scaled matrix the iteration started at ``U`` converges to.

    ``chi - psi`` in (0, pi) leads to B, in (-pi, 0) to B'; the values 0 and
    pi form the separatrix, where the first step lands on an orthogonal
    saddle point.

    Raises
    ------
    DegenerateCoset
        For the identity-like (``phi = 0``) and NOT-like (``phi = pi/2``) cosets.
    """
    p = u2_params(U)
    if np.sin(p.phi) < tol or np.cos(p.phi) < tol:
        raise DegenerateCoset(f"phi={p.phi!r} lies on a pole of the parametrization")
    d = wrap_angle(p.chi - p.psi)
    if abs(d) <= tol or abs(abs(d) - np.pi) <= tol:
        return Attractor.SEPARATRIX
    return Attractor.B if d > 0 else Attractor.BPRIME


def attractor_matrix(phi: float, target: Attractor) -> np.ndarray:
    if target is Attractor.B:
        return negator(phi)
    if target is Attractor.BPRIME:
        return negator(-phi)
    raise ValueError("the separatrix has no single attractor")


def u2_convergence_ratio(phi: float) -> float:
    """Asymptotic per-step potential ratio ``cos(2 phi)**4`` near the scaled matrix."""
    return float(np.cos(2.0 * phi) ** 4)


def real_line_sum_points(phi: float) -> list[U2Params]:
    """The twelve points of the coset of ``phi`` whose line sums are all real."""
    h = np.pi / 2
    tuples = [
        (0.0, 0.0, 0.0),
        (0.0, np.pi, 0.0),
        (h, -h, -h),
        (h, -h, h),
        (h, h, -h),
        (h, h, h),
        (np.pi, 0.0, 0.0),
        (np.pi, np.pi, 0.0),
        (-phi, 0.0, h),
        (-phi, np.pi, -h),
        (phi, 0.0, -h),
        (phi, np.pi, h),
    ]
    return [U2Params(phi, t, ps, ch) for t, ps, ch in tuples]


def named_points(phi: float) -> dict[str, np.ndarray]:
    """The orthogonal saddles ``S``, ``S'`` and the scaled matrices ``B``, ``B'``."""
    return {
        "S": u2_from_params(U2Params(phi, 0.0, 0.0, 0.0)),
        "S'": u2_from_params(U2Params(phi, np.pi, np.pi, 0.0)),
        "B": u2_from_params(U2Params(phi, -phi, 0.0, np.pi / 2)),
        "B'": u2_from_params(U2Params(phi, phi, 0.0, -np.pi / 2)),
    }
