"""Haar-distributed random unitary matrices.

Samples are drawn from the complex Ginibre ensemble and orthonormalized by
QR, fixing the phase ambiguity so that ``R`` has a positive real diagonal
(Mezzadri's recipe). Randomness comes from numpy's counter-based Philox
generator so that a ``(seed, counter)`` pair pins the sample sequence
independently of platform.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream", "sample_unitary", "sample_unitaries", "as_generator"]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(seed, counter)``.

    ``counter`` selects one of 2**64 non-overlapping sub-streams of ``seed``;
    Monte Carlo campaigns give sample ``i`` the stream ``(seed, i)``.
    """

    seed: int
    counter: int = 0

    def generator(self) -> np.random.Generator:
        # Counter in the top word: sub-streams are 2**192 draws apart.
        bitgen = np.random.Philox(
            key=self.seed & _MASK64, counter=[0, 0, 0, self.counter & _MASK64]
        )
        return np.random.Generator(bitgen)

    def split(self, index: int) -> "RngStream":
        return RngStream(self.seed, index)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator()
    raise TypeError(f"cannot build a generator from {type(rng).__name__}")


def sample_unitary(n: int, rng=None) -> np.ndarray:
    """Draw one ``n x n`` unitary from the Haar measure on U(n).

    Parameters
    ----------
    n : int
        Dimension, ``n >= 1``.
    rng : RngStream, numpy Generator, int or None
        Source of randomness. An int is used as the seed of ``RngStream(seed)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    gen = as_generator(rng)
    Z = (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))[None, :]


def sample_unitaries(n: int, count: int, seed: int, start: int = 0) -> np.ndarray:
    """Stack of ``count`` samples, sample ``i`` drawn from ``RngStream(seed, start + i)``."""
    out = np.empty((count, n, n), dtype=np.complex128)
    for i in range(count):
        out[i] = sample_unitary(n, RngStream(seed, start + i))
    return out
