"""Monte Carlo campaigns over Haar-random unitaries.

Sample ``i`` of a campaign is drawn from ``RngStream(seed, i)``, so results
do not depend on how the samples are split across worker threads.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .haar import sample_unitaries
from .matcore import potential
from .scaler import ScaleConfig, scale

__all__ = [
    "ExperimentConfig",
    "TableStats",
    "TABLE1_CHECKPOINTS",
    "psi_history",
    "table_stats",
    "table1_csv",
    "hist_csv",
    "corr_rows",
    "corr_csv",
]

TABLE1_CHECKPOINTS = (0, 1, 2, 3, 4, 5, 10, 20, 30, 40, 50, 100)
_CHUNK = 128


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    samples: int = 1000
    checkpoints: tuple = TABLE1_CHECKPOINTS
    seed: int = 0
    escape_enabled: bool = False
    workers: int | None = None

    def __post_init__(self):
        cps = tuple(int(k) for k in self.checkpoints)
        object.__setattr__(self, "checkpoints", cps)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not cps or cps[0] < 0 or any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be non-negative and strictly increasing")

    @property
    def steps(self) -> int:
        return self.checkpoints[-1]


@dataclass
class TableStats:
    checkpoints: tuple
    min_psi: np.ndarray
    ave_psi: np.ndarray
    max_psi: np.ndarray
    samples: int = field(default=0)

    def rows(self):
        for k, lo, av, hi in zip(self.checkpoints, self.min_psi, self.ave_psi, self.max_psi):
            yield int(k), float(lo), float(av), float(hi)


def _bare_chunk(cfg: ExperimentConfig, start: int, stop: int) -> np.ndarray:
    Ms = sample_unitaries(cfg.n, stop - start, cfg.seed, start)
    out = np.empty((stop - start, cfg.steps + 1))
    kernels.batch_psi(Ms, cfg.steps, out)
    return out


def _escape_chunk(cfg: ExperimentConfig, start: int, stop: int) -> np.ndarray:
    out = np.empty((stop - start, cfg.steps + 1))
    Ms = sample_unitaries(cfg.n, stop - start, cfg.seed, start)
    for row, A in enumerate(Ms):
        if cfg.steps == 0:
            out[row, 0] = potential(A)
            continue
        psi = scale(A, ScaleConfig(max_iter=cfg.steps, rng_seed=cfg.seed + start + row)).trace.psi
        psi = psi[: cfg.steps + 1]
        out[row, : len(psi)] = psi
        out[row, len(psi):] = psi[-1]  # converged runs hold their final value
    return out


def psi_history(cfg: ExperimentConfig) -> np.ndarray:
    """Potentials ``psi[i, k]`` of sample ``i`` after ``k`` steps, ``k = 0..steps``."""
    worker = _escape_chunk if cfg.escape_enabled else _bare_chunk
    bounds = [(s, min(s + _CHUNK, cfg.samples)) for s in range(0, cfg.samples, _CHUNK)]
    workers = cfg.workers or min(len(bounds), os.cpu_count() or 1)
    if workers <= 1:
        parts = [worker(cfg, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: worker(cfg, *ab), bounds))
    return np.concatenate(parts, axis=0)


def table_stats(psi: np.ndarray, checkpoints) -> TableStats:
    cols = psi[:, list(checkpoints)]
    return TableStats(
        checkpoints=tuple(checkpoints),
        min_psi=cols.min(axis=0),
        ave_psi=cols.mean(axis=0),
        max_psi=cols.max(axis=0),
        samples=psi.shape[0],
    )


def _fmt(x) -> str:
    return f"{x:.17g}"


def table1_csv(stats: TableStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "min_psi", "ave_psi", "max_psi"])
    for k, lo, av, hi in stats.rows():
        w.writerow([k, _fmt(lo), _fmt(av), _fmt(hi)])
    return buf.getvalue()


def hist_csv(psi: np.ndarray, checkpoints) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample"] + [f"psi_k{k}" for k in checkpoints])
    for i, row in enumerate(psi[:, list(checkpoints)]):
        w.writerow([i] + [_fmt(v) for v in row])
    return buf.getvalue()


def corr_rows(psi: np.ndarray, ks=(0, 1, 2)):
    """``(k, sample, psi_k, psi_{k+1})`` pairs for the before/after scatter."""
    for k in ks:
        for i in range(psi.shape[0]):
            yield k, i, float(psi[i, k]), float(psi[i, k + 1])


def corr_csv(psi: np.ndarray, ks=(0, 1, 2)) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "sample", "psi_k", "psi_k1"])
    for k, i, a, b in corr_rows(psi, ks):
        w.writerow([k, i, _fmt(a), _fmt(b)])
    return buf.getvalue()
