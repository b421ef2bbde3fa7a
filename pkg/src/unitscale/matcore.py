"""Dense complex matrix primitives used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
``(n, n)``. Diagonal phase matrices are kept as angle vectors
(:class:`DiagonalPhase`) so that long products of them stay exactly
unit-modulus.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "NonUnitaryInput",
    "DiagonalPhase",
    "LineSums",
    "as_matrix",
    "checked_unitary",
    "phi",
    "line_sums",
    "matrix_sum",
    "potential",
    "unitarity_residual",
    "apply_diagonals",
    "matrix_product",
    "wrap_angle",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_to_dict",
    "matrix_from_dict",
]

#: residual accepted by :func:`checked_unitary`
CHECKED_TOL = 1e-10


class NonUnitaryInput(ValueError):
    """Raised when a matrix fails a unitarity check."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"matrix is not unitary: unitarity residual {residual:.3e} exceeds {tol:.1e}"
        )


def wrap_angle(x):
    """Map angles to the half-open interval (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    if np.ndim(y) == 0:
        return float(y)
    return y


@dataclass(frozen=True, eq=False)
class DiagonalPhase:
    """Diagonal unitary ``diag(exp(1j*phases))`` stored by its angles."""

    phases: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.phases, dtype=float)).copy()
        if p.ndim != 1:
            raise ValueError("phases must be a 1-d sequence")
        if not np.all(np.isfinite(p)):
            raise ValueError("phases must be finite")
        p = wrap_angle(p)
        p.setflags(write=False)
        object.__setattr__(self, "phases", p)

    @classmethod
    def identity(cls, n: int) -> "DiagonalPhase":
        return cls(np.zeros(n))

    @classmethod
    def from_values(cls, values) -> "DiagonalPhase":
        """Build from unit-modulus complex diagonal entries (only their argument is kept)."""
        return cls(np.angle(np.asarray(values, dtype=complex)))

    @property
    def n(self) -> int:
        return self.phases.shape[0]

    @property
    def values(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    def matrix(self) -> np.ndarray:
        return np.diag(self.values)

    def inverse(self) -> "DiagonalPhase":
        return DiagonalPhase(-self.phases)

    def __matmul__(self, other: "DiagonalPhase") -> "DiagonalPhase":
        if not isinstance(other, DiagonalPhase):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        return DiagonalPhase(self.phases + other.phases)

    def is_identity(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.phases) <= tol))

    def __eq__(self, other):
        if not isinstance(other, DiagonalPhase):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.phases, other.phases))

    def __repr__(self):
        return f"DiagonalPhase({np.array2string(self.phases, precision=6)})"


@dataclass(frozen=True)
class LineSums:
    rows: np.ndarray
    cols: np.ndarray
    matrix_sum: complex

    def all(self) -> np.ndarray:
        """The 2n line sums, rows first."""
        return np.concatenate([self.rows, self.cols])


def as_matrix(M) -> np.ndarray:
    """Coerce to a square, finite ``complex128`` array."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def checked_unitary(M, tol: float = CHECKED_TOL) -> np.ndarray:
    """Like :func:`as_matrix` but raise :class:`NonUnitaryInput` past ``tol``."""
    A = as_matrix(M)
    res = unitarity_residual(A)
    if res > tol:
        raise NonUnitaryInput(res, tol)
    return A


def phi(y: complex) -> complex:
    """Phase of a complex number: ``y/|y|``, and exactly ``1`` when ``y == 0``."""
    y = complex(y)
    a = abs(y)
    if a == 0.0:
        return 1 + 0j
    return y / a


def line_sums(M) -> LineSums:
    A = np.asarray(M)
    return LineSums(rows=A.sum(axis=1), cols=A.sum(axis=0), matrix_sum=complex(A.sum()))


def matrix_sum(M) -> complex:
    return complex(np.asarray(M).sum())


def potential(M) -> float:
    """``n**2 - |sum of all entries|**2``; zero exactly on unit-line-sum matrices up to a phase."""
    A = np.asarray(M)
    n = A.shape[0]
    return float(n * n - abs(A.sum()) ** 2)


def unitarity_residual(M) -> float:
    """Max-abs entry of ``M^H M - I``."""
    A = np.asarray(M, dtype=np.complex128)
    G = A.conj().T @ A
    G[np.diag_indices_from(G)] -= 1.0
    return float(np.abs(G).max())


def apply_diagonals(L: DiagonalPhase, M, R: DiagonalPhase) -> np.ndarray:
    """Return ``L @ M @ R`` for diagonal phase matrices ``L`` and ``R``."""
    A = np.asarray(M, dtype=np.complex128)
    n = A.shape[0]
    if L.n != n or R.n != n or A.shape != (n, n):
        raise ValueError(f"dimension mismatch: L={L.n}, M={A.shape}, R={R.n}")
    return L.values[:, None] * A * R.values[None, :]


def matrix_product(Ms: Sequence) -> np.ndarray:
    """Left-to-right product of a sequence of square matrices."""
    Ms = list(Ms)
    if not Ms:
        raise ValueError("empty product")
    out = np.asarray(Ms[0], dtype=np.complex128)
    for M in Ms[1:]:
        B = np.asarray(M, dtype=np.complex128)
        if B.shape[0] != out.shape[1]:
            raise ValueError(f"dimension mismatch: {out.shape} @ {B.shape}")
        out = out @ B
    return out


# -- Matrix JSON -------------------------------------------------------------
# {"n": <int>, "entries": [[re, im], ...]} row-major. Python's float repr is the
# shortest round-trip representation, so json.dumps is lossless.

def matrix_to_dict(M) -> dict:
    A = np.asarray(M, dtype=np.complex128)
    n = A.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in A.reshape(-1)]
    return {"n": int(n), "entries": entries}


def matrix_from_dict(d: dict) -> np.ndarray:
    try:
        n = d["n"]
        entries = d["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix JSON must have keys 'n' and 'entries': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"'n' must be a positive integer, got {n!r}")
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries for n={n}, got {len(entries)}")
    out = np.empty(n * n, dtype=np.complex128)
    for idx, pair in enumerate(entries):
        row, col = divmod(idx, n)
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ValueError(f"entry ({row}, {col}) must be a [re, im] number pair, got {pair!r}")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"entry ({row}, {col}) is not finite: {pair!r}")
        out[idx] = complex(re, im)
    return out.reshape(n, n)


def matrix_to_json(M) -> str:
    return json.dumps(matrix_to_dict(M))


def matrix_from_json(text: str) -> np.ndarray:
    return matrix_from_dict(json.loads(text))


def iter_matrices_json(lines: Iterable[str]):
    """Parse a stream with one Matrix JSON object per non-blank line."""
    for line in lines:
        line = line.strip()
        if line:
            yield matrix_from_json(line)
