"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Reference numbers are the published values the criteria are stated against.
"""
import time

import numpy as np
import pytest

from conftest import A3, HADAMARD
from unitscale import experiment as exp
from unitscale.haar import RngStream, sample_unitaries, sample_unitary
from unitscale.cli import gradcheck_matrix
from unitscale.matcore import line_sums
from unitscale.scaler import PRESTART, ScaleConfig, scale
from unitscale.u2 import (
    Attractor,
    Branch,
    U2Params,
    attractor_matrix,
    u2_analytic_zxz,
    u2_convergence_ratio,
    u2_from_params,
    u2_params,
    u2_predict_attractor,
)
from unitscale.zxz import xzxzxz_decompose, zxz_decompose

pytestmark = pytest.mark.acceptance

PSI_REF = [4.00000, 1.16956, 0.44189, 0.17167, 0.07723, 0.03885]
A5_REF = np.array(
    [
        [-0.2398 + 0.0708j, 0.7522 + 0.2432j, 0.4337 - 0.3527j],
        [0.7113 - 0.3451j, 0.4945 + 0.0739j, -0.2341 + 0.2649j],
        [0.4871 + 0.2742j, -0.1564 - 0.3171j, 0.7448 + 0.0878j],
    ]
)

# min / ave / max of Psi over 1000 random samples after k steps
POP_REF = {
    3: {1: 0.46696, 2: 0.22149, 3: 0.13886, 4: 0.09704, 5: 0.07311, 10: 0.02973},
    4: {1: 1.04461, 2: 0.47963, 3: 0.31220, 4: 0.23075, 5: 0.18143, 10: 0.08351},
}

HADAMARD_REF = {
    "phase": (1 + 1j) / np.sqrt(2),
    "Z1": np.diag([1, 1j]),
    "X": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]) / 2,
    "Z2": np.diag([1, -1j]),
}


def test_crit01_three_by_three_regression(verdict):
    cfg = ScaleConfig(max_iter=5)
    scale(A3, cfg)  # warm-up
    best = np.inf
    for _ in range(20):
        t0 = time.perf_counter()
        res = scale(A3, cfg)
        best = min(best, time.perf_counter() - t0)
    psi_err = np.abs(res.trace.psi[:6] - PSI_REF).max()
    a5_err = np.abs(res.B - A5_REF).max()
    ok = verdict(
        "1 three-by-three regression",
        psi_err < 1e-4 and a5_err < 2e-3 and best < 1e-3,
        f"max |dPsi|={psi_err:.2e}, max |dA5|={a5_err:.2e}, runtime {best * 1e3:.3f} ms",
    )
    assert ok


def test_crit02_matrix_sum_bound(verdict):
    t0 = time.perf_counter()
    worst_m, worst_r = -np.inf, 0.0
    for n in (2, 3, 4, 5):
        Us = sample_unitaries(n, 10_000, seed=2)
        worst_m = max(worst_m, float((np.abs(Us.sum(axis=(1, 2))) - n).max()))
        rows = Us.sum(axis=2)
        worst_r = max(worst_r, float(np.abs((np.abs(rows) ** 2).sum(axis=1) - n).max()))
    elapsed = time.perf_counter() - t0
    ok = verdict(
        "2 matrix-sum bound",
        worst_m <= 1e-9 and worst_r <= 1e-9 and elapsed < 5.0,
        f"max(|som|-n)={worst_m:.3e}, max|sum|r|^2-n|={worst_r:.2e}, runtime {elapsed:.2f} s",
    )
    assert ok


def test_crit03_population_statistics(verdict):
    t0 = time.perf_counter()
    failures, notes = [], []
    for n in (3, 4):
        cfg = exp.ExperimentConfig(n=n, samples=1000, seed=0, escape_enabled=False)
        stats = exp.table_stats(exp.psi_history(cfg), cfg.checkpoints)
        ave = dict(zip(stats.checkpoints, stats.ave_psi))
        lo = dict(zip(stats.checkpoints, stats.min_psi))
        hi = dict(zip(stats.checkpoints, stats.max_psi))
        for k, ref in POP_REF[n].items():
            rel = (ave[k] - ref) / ref
            notes.append(f"n={n} k={k} {rel:+.0%}")
            if abs(rel) > 0.20:
                failures.append(f"ave n={n} k={k}: {ave[k]:.5f} vs {ref:.5f} ({rel:+.0%})")
        for k in stats.checkpoints:
            if k >= 4 and not lo[k] < 1e-4:
                failures.append(f"min n={n} k={k}: {lo[k]:.3e}")
        if n == 3 and not hi[100] > 0.1:
            failures.append(f"max n=3 k=100: {hi[100]:.3e}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f} s")
    ok = verdict(
        "3 population statistics",
        not failures,
        ("; ".join(failures) if failures else ", ".join(notes)) + f" (runtime {elapsed:.2f} s)",
    )
    assert ok, "\n".join(failures)


def test_crit04_monotone_descent(verdict):
    worst, pairs = -np.inf, 0
    for n in (2, 3, 4, 5):
        for i in range(250):
            U = sample_unitary(n, RngStream(4, n * 1000 + i))
            tr = scale(U, ScaleConfig(rng_seed=i)).trace
            skip = {k for k, _ in tr.events}
            for k in range(len(tr) - 1):
                if k in skip:
                    continue
                worst = max(worst, tr.psi[k + 1] - tr.psi[k])
                pairs += 1
    ok = verdict(
        "4 monotone descent",
        worst <= 1e-12,
        f"{pairs} steps, max increase {worst:.2e}",
    )
    assert ok


def test_crit05_zxz_round_trip(verdict):
    worst_rec, worst_ls, worst_x6 = 0.0, 0.0, 0.0
    for n in (2, 3, 4, 5, 6):
        for i in range(200):
            U = sample_unitary(n, RngStream(5, n * 1000 + i))
            d = zxz_decompose(U, ScaleConfig(rng_seed=i))
            s = line_sums(d.X)
            worst_rec = max(worst_rec, d.residual(U))
            worst_ls = max(worst_ls, float(np.abs(s.all() - 1).max()))
            if n % 2 == 0:
                worst_x6 = max(worst_x6, xzxzxz_decompose(U, ScaleConfig(rng_seed=i)).residual(U))
    ok = verdict(
        "5 ZXZ round trip",
        worst_rec <= 1e-8 and worst_ls <= 1e-8 and worst_x6 <= 1e-8,
        f"ZXZ residual {worst_rec:.1e}, X line sums {worst_ls:.1e}, XZXZXZ residual {worst_x6:.1e}",
    )
    assert ok


def test_crit06_hadamard_factors(verdict):
    report = []
    any_match = False
    for branch in Branch:
        d = u2_analytic_zxz(HADAMARD, branch)
        errs = {
            "phase": abs(np.exp(1j * d.alpha) - HADAMARD_REF["phase"]),
            "Z1": np.abs(d.Z1.matrix() - HADAMARD_REF["Z1"]).max(),
            "X": np.abs(d.X - HADAMARD_REF["X"]).max(),
            "Z2": np.abs(d.Z2.matrix() - HADAMARD_REF["Z2"]).max(),
        }
        bad = [f"{k} off by {v:.2g}" for k, v in errs.items() if v > 1e-12]
        any_match |= not bad
        report.append(
            f"{branch.value}: " + (", ".join(bad) if bad else "all factors match")
            + f", reconstruction {d.residual(HADAMARD):.1e}"
        )
    ok = verdict("6 Hadamard factors", any_match, "; ".join(report))
    assert ok, "; ".join(report)


def test_crit07_gradient(verdict):
    worst, ok = 0.0, True
    for i in range(100):
        dev, good, _ = gradcheck_matrix(sample_unitary(4, RngStream(7, i)), h=1e-6)
        worst, ok = max(worst, dev), ok and good
    ok = verdict("7 gradient check", ok, f"max relative deviation {worst:.2e}")
    assert ok


def test_crit08_rate_law(verdict):
    report, ok = [], True
    for phi in (np.pi / 8, np.pi / 6, np.pi / 5):
        U = u2_from_params(U2Params(phi, -phi, 0.05, np.pi / 2 + 0.02))
        psi = scale(U).trace.psi
        k = np.arange(len(psi))
        use = (k >= 1) & (psi > 1e-10)
        ratio = float(np.exp(np.polyfit(k[use], np.log(psi[use]), 1)[0]))
        target = u2_convergence_ratio(phi)
        rel = abs(ratio - target) / target
        ok &= rel <= 0.02
        report.append(f"phi={phi:.4f}: {ratio:.6f} vs {target:.6f} ({rel:.1e})")
    verdict("8 rate law", ok, "; ".join(report))
    assert ok


def test_crit09_attractor_prediction(verdict):
    agree = total = 0
    i = 0
    while total < 500:
        U = sample_unitary(2, RngStream(9, i))
        i += 1
        target = u2_predict_attractor(U)
        if target is Attractor.SEPARATRIX:
            continue
        res = scale(U)
        expected = attractor_matrix(u2_params(U).phi, target)
        agree += bool(res.converged and np.abs(res.B - expected).max() <= 1e-6)
        total += 1
    ok = verdict("9 attractor prediction", agree == total, f"{agree}/{total} agree")
    assert ok


def test_crit10_rotation_family(verdict):
    phis = np.linspace(0, np.pi / 4, 52)[1:-1]
    flagged = converged = 0
    worst = 0.0
    for phi in phis:
        c, s = np.cos(phi), np.sin(phi)
        res = scale(np.array([[c, s], [-s, c]], dtype=complex), ScaleConfig(tol_residual=1e-10))
        flagged += any(kind == PRESTART for _, kind in res.trace.events)
        converged += res.converged
        worst = max(worst, float(res.trace.residual[-1]))
    n = len(phis)
    ok = verdict(
        "10 rotation family",
        flagged == n and converged == n and worst < 1e-10,
        f"{flagged}/{n} perturbed at start, {converged}/{n} converged, max residual {worst:.1e}",
    )
    assert ok
