"""Decompositions ``U = e^{i alpha} Z1 X Z2`` and ``U = X0 Z0 X0^-1 Z1' X Z2``.

``X`` has all 2n line sums equal to 1 (the group XU(n)); ``Z1``, ``Z2`` are
diagonal unitaries with upper-left entry 1 (the group ZU(n)). For n > 2 the
factors come from :func:`unitscale.scaler.scale`; for n = 2 the closed form
in :mod:`unitscale.u2` is used.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import DiagonalPhase, as_matrix, checked_unitary, matrix_from_dict, matrix_to_dict, wrap_angle
from .scaler import INPUT_UNITARITY_TOL, ScaleConfig, ScaleResult, scale

__all__ = [
    "ZXZDecomposition",
    "XZXZXZDecomposition",
    "ScalingDidNotConverge",
    "OddDimension",
    "Membership",
    "zxz_decompose",
    "xzxzxz_decompose",
    "from_scaling",
    "membership",
    "phasor",
    "negator",
    "cyclic_shift",
]


class ScalingDidNotConverge(RuntimeError):
    def __init__(self, result: ScaleResult):
        self.result = result
        super().__init__(
            f"scaling stopped with status {result.status.value} after {result.iterations} "
            f"iterations (line-sum residual {result.trace.residual[-1]:.3e})"
        )


class OddDimension(ValueError):
    pass


class Membership(enum.Enum):
    XU = "XU"
    ZU = "ZU"
    BOTH = "Both"
    NEITHER = "Neither"


def phasor(theta: float) -> np.ndarray:
    """``diag(1, e^{i theta})``, the generator of ZU(2)."""
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * theta)]], dtype=np.complex128)


def negator(theta: float) -> np.ndarray:
    """``e^{-i theta} [[cos, i sin], [i sin, cos]](theta)``, a theta-power root of NOT in XU(2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.exp(-1j * theta) * np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def cyclic_shift(n: int) -> np.ndarray:
    """Permutation matrix with ones at ``(i, i+1 mod n)``."""
    return np.eye(n, dtype=np.complex128)[np.roll(np.arange(n), -1)]


def _corner_normalized(p: DiagonalPhase) -> DiagonalPhase:
    return DiagonalPhase(p.phases - p.phases[0])


@dataclass(frozen=True)
class ZXZDecomposition:
    alpha: float
    Z1: DiagonalPhase
    X: np.ndarray
    Z2: DiagonalPhase

    def reconstruct(self) -> np.ndarray:
        return np.exp(1j * self.alpha) * (self.Z1.values[:, None] * self.X * self.Z2.values[None, :])

    def residual(self, U) -> float:
        """Max-abs entry of the reconstruction error."""
        return float(np.abs(self.reconstruct() - np.asarray(U)).max())

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "z1": [float(v) for v in self.Z1.phases],
            "x": matrix_to_dict(self.X),
            "z2": [float(v) for v in self.Z2.phases],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZXZDecomposition":
        return cls(
            alpha=float(d["alpha"]),
            Z1=DiagonalPhase(d["z1"]),
            X=matrix_from_dict(d["x"]),
            Z2=DiagonalPhase(d["z2"]),
        )


@dataclass(frozen=True)
class XZXZXZDecomposition:
    base: ZXZDecomposition
    X0: np.ndarray
    Z0: DiagonalPhase
    Z1p: DiagonalPhase

    @property
    def X(self) -> np.ndarray:
        return self.base.X

    @property
    def Z2(self) -> DiagonalPhase:
        return self.base.Z2

    def factors(self) -> list:
        return [self.X0, self.Z0.matrix(), self.X0.T, self.Z1p.matrix(), self.X, self.Z2.matrix()]

    def reconstruct(self) -> np.ndarray:
        out = self.factors()[0]
        for F in self.factors()[1:]:
            out = out @ F
        return out

    def residual(self, U) -> float:
        return float(np.abs(self.reconstruct() - np.asarray(U)).max())

    def to_dict(self) -> dict:
        d = self.base.to_dict()
        d["z0"] = [float(v) for v in self.Z0.phases]
        d["z1p"] = [float(v) for v in self.Z1p.phases]
        d["x0"] = [int(j) for j in np.argmax(np.abs(self.X0), axis=1)]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "XZXZXZDecomposition":
        perm = list(d["x0"])
        n = len(perm)
        X0 = np.zeros((n, n), dtype=np.complex128)
        X0[np.arange(n), perm] = 1.0
        return cls(
            base=ZXZDecomposition.from_dict(d),
            X0=X0,
            Z0=DiagonalPhase(d["z0"]),
            Z1p=DiagonalPhase(d["z1p"]),
        )


def from_scaling(result: ScaleResult) -> ZXZDecomposition:
    """Turn ``B = L U R`` into ``U = e^{i alpha} Z1 B Z2``."""
    lam, rho = result.L.phases, result.R.phases
    return ZXZDecomposition(
        alpha=wrap_angle(-lam[0] - rho[0]),
        Z1=_corner_normalized(result.L.inverse()),
        X=result.B.copy(),
        Z2=_corner_normalized(result.R.inverse()),
    )


def zxz_decompose(U, cfg: ScaleConfig | None = None, branch=None) -> ZXZDecomposition:
    """Factor a unitary as ``e^{i alpha} Z1 X Z2``.

    Parameters
    ----------
    U : array_like
        ``n x n`` unitary.
    cfg : ScaleConfig, optional
        Iteration settings, used for ``n != 2``.
    branch : u2.Branch, optional
        Which of the two closed-form factorizations to return for ``n == 2``
        (default ``Branch.FIRST``).

    Raises
    ------
    ScalingDidNotConverge
        If the iteration stops without reaching unit line sums.
    """
    U = checked_unitary(U, INPUT_UNITARITY_TOL)
    if U.shape[0] == 2:
        from .u2 import Branch, u2_analytic_zxz

        return u2_analytic_zxz(U, branch or Branch.FIRST)
    result = scale(U, cfg)
    if not result.converged:
        raise ScalingDidNotConverge(result)
    return from_scaling(result)


def xzxzxz_decompose(U, cfg: ScaleConfig | None = None, branch=None) -> XZXZXZDecomposition:
    """Factor a unitary of even dimension as ``X0 Z0 X0^-1 Z1' X Z2``.

    The global phase ``a = e^{i alpha}`` of the ZXZ form is absorbed through
    ``a I = X0 D X0^-1 D`` with ``D = diag(1, a, 1, a, ...)``, so that
    ``Z0 = D`` and ``Z1' = D Z1``.
    """
    U = as_matrix(U)
    n = U.shape[0]
    if n % 2:
        raise OddDimension(f"the XZXZXZ form needs an even dimension, got n={n}")
    base = zxz_decompose(U, cfg, branch)
    D = np.zeros(n)
    D[1::2] = base.alpha
    return XZXZXZDecomposition(
        base=base,
        X0=cyclic_shift(n),
        Z0=DiagonalPhase(D),
        Z1p=DiagonalPhase(D + base.Z1.phases),
    )


def membership(M, tol: float = 1e-8) -> Membership:
    """Which of XU(n) (unit line sums) and ZU(n) (diagonal, corner 1) contain ``M``."""
    A = as_matrix(M)
    n = A.shape[0]
    xu = bool(
        np.abs(A.sum(axis=0) - 1.0).max() <= tol and np.abs(A.sum(axis=1) - 1.0).max() <= tol
    )
    off = A - np.diag(np.diag(A))
    d = np.diag(A)
    zu = bool(
        (n == 1 or np.abs(off).max() <= tol)
        and np.abs(np.abs(d) - 1.0).max() <= tol
        and abs(d[0] - 1.0) <= tol
    )
    if xu and zu:
        return Membership.BOTH
    if xu:
        return Membership.XU
    if zu:
        return Membership.ZU
    return Membership.NEITHER
