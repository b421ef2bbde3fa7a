"""Scaling a unitary matrix to unit line sums by diagonal phase matrices.

Each step normalizes the phases of the row sums and then of the column sums,
which never decreases ``|sum of entries|`` and hence never increases the
potential ``n**2 - |sum|**2``. The loop in :func:`scale` adds the two
safeguards the plain iteration needs: a perturbation when the start matrix
already has all line sums in phase (the iteration would not move), and an
escape when the potential stalls above zero. Stalls at saddle points are left
by a small descent move; stalls at genuine local minima, which do occur for
n >= 3, are left by restarting from random phases within the same double coset.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .matcore import (
    DiagonalPhase,
    NonUnitaryInput,
    apply_diagonals,
    as_matrix,
    line_sums,
    potential,
    unitarity_residual,
)

__all__ = [
    "ScaleConfig",
    "ScaleTrace",
    "ScaleResult",
    "Status",
    "INPUT_UNITARITY_TOL",
    "sinkhorn_step",
    "scale",
    "detect_constant_argument_start",
    "prestart_perturbation",
    "escape_saddle",
    "line_sum_residual",
]

#: inputs with a larger unitarity residual are rejected by :func:`scale`
INPUT_UNITARITY_TOL = 1e-8
#: argument/modulus tolerance used by :func:`scale` to spot an in-phase start
START_ARG_TOL = 1e-10
PRESTART = "prestart_perturbation"
SADDLE_ESCAPE = "saddle_escape"
RANDOM_RESTART = "random_restart"


class Status(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITER_REACHED = "MaxIterReached"
    STALLED_AT_SADDLE = "StalledAtSaddle"


@dataclass(frozen=True)
class ScaleConfig:
    tol_residual: float = 1e-10
    max_iter: int = 100_000
    stall_window: int = 50
    stall_epsilon: float = 1e-14
    escape_enabled: bool = True
    escape_delta: float = 1e-3
    rng_seed: int = 0
    # restarts from uniformly random phases: after a stall the local escape
    # cannot leave, or after restart_patience iterations (doubling each time)
    # without convergence
    max_restarts: int = 100
    restart_patience: int = 5000

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if not self.stall_epsilon < self.tol_residual:
            raise ValueError("stall_epsilon must be smaller than tol_residual")
        if self.max_iter < 1 or self.stall_window < 1:
            raise ValueError("max_iter and stall_window must be positive")
        if self.restart_patience < self.stall_window:
            raise ValueError("restart_patience must be at least stall_window")
        if self.max_restarts < 0:
            raise ValueError("max_restarts must be non-negative")


@dataclass
class ScaleTrace:
    """Per-iteration potential and residual, plus the perturbation events.

    Record ``k`` describes ``A_k``; record 0 is the start matrix (after any
    start perturbation). ``events`` holds ``(k, kind)``: the perturbation was
    applied to ``A_k`` before step ``k + 1``.
    """

    k: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    psi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    residual: np.ndarray = field(default_factory=lambda: np.zeros(0))
    events: list = field(default_factory=list)

    def __len__(self):
        return len(self.k)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "psi", "residual", "event"])
        ev = {}
        for it, kind in self.events:
            ev.setdefault(it, []).append(kind)
        for k, p, r in zip(self.k, self.psi, self.residual):
            w.writerow([int(k), f"{p:.17g}", f"{r:.17g}", "+".join(ev.get(int(k), []))])
        return buf.getvalue()


@dataclass
class ScaleResult:
    B: np.ndarray
    L: DiagonalPhase
    R: DiagonalPhase
    trace: ScaleTrace
    status: Status

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def iterations(self) -> int:
        return int(self.trace.k[-1]) if len(self.trace) else 0


def line_sum_residual(A) -> float:
    """Largest distance of any of the 2n line sums from 1."""
    s = line_sums(A)
    return float(np.abs(s.all() - 1.0).max())


def sinkhorn_step(A_prev):
    """One scaling step.

    Returns ``(L_k, R_k, A_k)`` with ``A_k = L_k A_prev R_k``, where ``L_k``
    cancels the phases of the row sums of ``A_prev`` and ``R_k`` those of the
    column sums of ``L_k A_prev``.
    """
    M = as_matrix(A_prev)
    n = M.shape[0]
    lam, rho = np.zeros(n), np.zeros(n)
    kernels.run_steps(M, lam, rho, 1, 0.0, np.zeros(1), np.zeros(1))
    return DiagonalPhase(lam), DiagonalPhase(rho), M


def _same_argument(z, tol):
    z = np.asarray(z)
    z = z[np.abs(z) > tol]
    if z.size < 2:
        return True
    rel = np.angle(z * np.conj(z[0]))
    return bool(np.all(np.abs(rel) <= tol))


def detect_constant_argument_start(A, tol_arg: float = START_ARG_TOL) -> bool:
    """True iff all line sums of modulus above ``tol_arg`` share one argument."""
    return _same_argument(line_sums(A).all(), tol_arg)


def prestart_perturbation(A, tol_arg: float = START_ARG_TOL):
    """Diagonal phases ``(L0, R0)`` moving an in-phase start off its stationary point.

    A single phase of ``pi/2`` is put on one diagonal entry: of ``L0`` at the
    first nonzero row sum when there are at least two nonzero row sums, else
    of ``R0`` at the first nonzero column sum when there are at least two of
    those, else (generalized Hadamard: one nonzero row and one nonzero column
    sum) of ``L0`` at the nonzero row. If that leaves the line sums in phase,
    other positions and angles are tried.
    """
    A = as_matrix(A)
    n = A.shape[0]
    s = line_sums(A)
    nz_rows = np.flatnonzero(np.abs(s.rows) > tol_arg)
    nz_cols = np.flatnonzero(np.abs(s.cols) > tol_arg)

    if nz_rows.size >= 2:
        first = ("L", int(nz_rows[0]))
    elif nz_cols.size >= 2:
        first = ("R", int(nz_cols[0]))
    else:
        first = ("L", int(nz_rows[0]) if nz_rows.size else 0)

    candidates = [first] + [(side, x) for side in "LR" for x in range(n) if (side, x) != first]
    for delta in (np.pi / 2, np.pi / 3, 2 * np.pi / 3, np.pi / 4):
        for side, x in candidates:
            ph = np.zeros(n)
            ph[x] = delta
            L0 = DiagonalPhase(ph if side == "L" else np.zeros(n))
            R0 = DiagonalPhase(ph if side == "R" else np.zeros(n))
            if not detect_constant_argument_start(apply_diagonals(L0, A, R0), tol_arg):
                return L0, R0
    raise ValueError("no single-phase perturbation breaks the line-sum phase agreement")


def escape_saddle(A_stalled, cfg: ScaleConfig | None = None, rng=None):
    """Diagonal phases ``(L, R)`` near identity that lower the potential of a stalled matrix.

    Trials move ``(lambda, rho)`` by ``escape_delta`` along ``n`` mutually
    orthogonal directions: first the conjugations ``lambda_j = +d,
    rho_j = -d`` (orthogonal to the global-phase direction), and only if none
    of those helps, ``lambda_j = rho_j = d``. Each direction gets a random sign.
    The best strictly improving trial wins; identity phases are returned when
    nothing improves, which is also the answer at a strict local minimum.
    """
    cfg = cfg or ScaleConfig()
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    A = as_matrix(A_stalled)
    n = A.shape[0]
    psi0 = potential(A)
    # below this margin a "decrease" is rounding noise in n**2 - |m|**2
    margin = 8 * np.finfo(float).eps * n * n
    ident = DiagonalPhase.identity(n)
    if n < 2:
        return ident, ident

    signs = gen.choice([-1.0, 1.0], size=n)
    for rho_sign in (-1.0, 1.0):
        best, best_psi = None, psi0 - margin
        for j in range(n):
            lam = np.zeros(n)
            lam[j] = signs[j] * cfg.escape_delta
            L, R = DiagonalPhase(lam), DiagonalPhase(rho_sign * lam)
            p = potential(apply_diagonals(L, A, R))
            if p < best_psi:
                best, best_psi = (L, R), p
        if best is not None:
            return best
    return ident, ident


def _stalled(psi_hist, k, last_event, cfg):
    if k - last_event < cfg.stall_window:
        return False
    drop = psi_hist[k - cfg.stall_window] - psi_hist[k]
    # near the global minimum progress is legitimately tiny
    return drop < cfg.stall_epsilon and psi_hist[k] > cfg.tol_residual


def scale(A, cfg: ScaleConfig | None = None) -> ScaleResult:
    """Scale a unitary ``A`` to ``B = L A R`` with all line sums equal to 1.

    Raises
    ------
    NonUnitaryInput
        If the unitarity residual of ``A`` exceeds ``INPUT_UNITARITY_TOL``.
    """
    cfg = cfg or ScaleConfig()
    A = as_matrix(A)
    res_u = unitarity_residual(A)
    if res_u > INPUT_UNITARITY_TOL:
        raise NonUnitaryInput(res_u, INPUT_UNITARITY_TOL)
    n = A.shape[0]
    gen = np.random.default_rng(cfg.rng_seed)

    M = A.copy()
    lam, rho = np.zeros(n), np.zeros(n)
    events = []

    res0 = line_sum_residual(M)
    if res0 >= cfg.tol_residual and potential(M) > cfg.tol_residual and detect_constant_argument_start(M):
        L0, R0 = prestart_perturbation(M)
        M = apply_diagonals(L0, M, R0)
        lam += L0.phases
        rho += R0.phases
        events.append((0, PRESTART))
        res0 = line_sum_residual(M)

    psi_hist = [potential(M)]
    res_hist = [res0]
    status = Status.MAX_ITER_REACHED
    if res0 < cfg.tol_residual:
        status = Status.CONVERGED

    k = 0
    last_event = 0
    restarts = 0
    patience = cfg.restart_patience
    psi_buf = np.empty(cfg.stall_window)
    res_buf = np.empty(cfg.stall_window)
    while status is Status.MAX_ITER_REACHED and k < cfg.max_iter:
        chunk = min(cfg.stall_window, cfg.max_iter - k)
        done = kernels.run_steps(M, lam, rho, chunk, cfg.tol_residual, psi_buf, res_buf)
        psi_hist.extend(psi_buf[:done].tolist())
        res_hist.extend(res_buf[:done].tolist())
        k += done
        if res_buf[done - 1] < cfg.tol_residual:
            status = Status.CONVERGED
            break
        if not cfg.escape_enabled:
            if _stalled(psi_hist, k, last_event, cfg):
                status = Status.STALLED_AT_SADDLE
                break
            continue
        kind = None
        if _stalled(psi_hist, k, last_event, cfg):
            L, R = escape_saddle(M, cfg, gen)
            kind = SADDLE_ESCAPE
            if L.is_identity() and R.is_identity():
                # a local minimum: no nearby descent exists
                kind = RANDOM_RESTART
        elif k - last_event >= patience:
            kind = RANDOM_RESTART
            patience *= 2
        if kind is None:
            continue
        if kind == RANDOM_RESTART:
            if restarts >= cfg.max_restarts:
                status = Status.STALLED_AT_SADDLE
                break
            L = DiagonalPhase(gen.uniform(-np.pi, np.pi, n))
            R = DiagonalPhase(gen.uniform(-np.pi, np.pi, n))
            restarts += 1
        M = apply_diagonals(L, M, R)
        lam += L.phases
        rho += R.phases
        events.append((k, kind))
        last_event = k

    trace = ScaleTrace(
        k=np.arange(len(psi_hist), dtype=np.int64),
        psi=np.asarray(psi_hist),
        residual=np.asarray(res_hist),
        events=events,
    )
    return ScaleResult(B=M, L=DiagonalPhase(lam), R=DiagonalPhase(rho), trace=trace, status=status)
