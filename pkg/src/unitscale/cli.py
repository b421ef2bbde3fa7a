"""Command-line interface: ``unitscale {scale,decompose,random,experiment,gradcheck}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import experiment as exp
from .haar import RngStream, sample_unitary
from .landscape import finite_difference_gradient, gradient
from .matcore import (
    NonUnitaryInput,
    matrix_from_dict,
    matrix_to_dict,
    matrix_to_json,
    unitarity_residual,
)
from .scaler import INPUT_UNITARITY_TOL, ScaleConfig, Status, scale
from .u2 import Branch
from .zxz import OddDimension, ScalingDidNotConverge, xzxzxz_decompose, zxz_decompose

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_STALLED = 2
EXIT_MAX_ITER = 3

GRADCHECK_H = 1e-6
GRADCHECK_REL = 1e-5
GRADCHECK_ABS = 1e-8


class InputError(Exception):
    pass


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output) -> None:
    if output:
        atomic_write(output, text)
    else:
        sys.stdout.write(text)


def load_matrix(path) -> np.ndarray:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    try:
        A = matrix_from_dict(data)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    res = unitarity_residual(A)
    if res > INPUT_UNITARITY_TOL:
        G = np.abs(A.conj().T @ A - np.eye(A.shape[0]))
        i, j = np.unravel_index(np.argmax(G), G.shape)
        raise InputError(
            f"{path}: matrix is not unitary: unitarity residual {res:.3e} > {INPUT_UNITARITY_TOL:.0e} "
            f"(worst entry ({i}, {j}) of M^H M - I)"
        )
    return A


def _scale_config(args) -> ScaleConfig:
    kw = dict(rng_seed=args.seed, escape_enabled=not args.no_escape)
    if args.tol is not None:
        kw["tol_residual"] = args.tol
    if args.max_iter is not None:
        kw["max_iter"] = args.max_iter
    return ScaleConfig(**kw)


def cmd_scale(args) -> int:
    A = load_matrix(args.input)
    result = scale(A, _scale_config(args))
    payload = {
        "status": result.status.value,
        "iterations": result.iterations,
        "residual": float(result.trace.residual[-1]),
        "psi": float(result.trace.psi[-1]),
        "B": matrix_to_dict(result.B),
        "L": [float(v) for v in result.L.phases],
        "R": [float(v) for v in result.R.phases],
        "events": [{"k": int(k), "kind": kind} for k, kind in result.trace.events],
    }
    trace_path = args.trace
    if trace_path is None and args.output:
        trace_path = str(Path(args.output).with_suffix("")) + ".trace.csv"
    if trace_path:
        atomic_write(trace_path, result.trace.to_csv())
    _emit(json.dumps(payload, indent=1) + "\n", args.output)
    return {
        Status.CONVERGED: EXIT_OK,
        Status.STALLED_AT_SADDLE: EXIT_STALLED,
        Status.MAX_ITER_REACHED: EXIT_MAX_ITER,
    }[result.status]


def cmd_decompose(args) -> int:
    A = load_matrix(args.input)
    cfg = _scale_config(args)
    branch = Branch(args.branch)
    try:
        if args.form == "xzxzxz":
            dec = xzxzxz_decompose(A, cfg, branch)
        else:
            dec = zxz_decompose(A, cfg, branch)
    except OddDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScalingDidNotConverge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALLED
    payload = dec.to_dict()
    payload["form"] = args.form
    payload["residual"] = dec.residual(A)
    _emit(json.dumps(payload, indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_random(args) -> int:
    lines = [
        matrix_to_json(sample_unitary(args.n, RngStream(args.seed, i))) for i in range(args.count)
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_experiment(args) -> int:
    checkpoints = tuple(int(k) for k in args.checkpoints.split(","))
    if args.mode == "corr" and checkpoints[-1] < 3:
        checkpoints = tuple(sorted(set(checkpoints) | {3}))
    cfg = exp.ExperimentConfig(
        n=args.n,
        samples=args.samples,
        checkpoints=checkpoints,
        seed=args.seed,
        escape_enabled=(not args.no_escape) and args.mode != "table1",
        workers=args.workers,
    )
    psi = exp.psi_history(cfg)
    if args.mode == "table1":
        text = exp.table1_csv(exp.table_stats(psi, cfg.checkpoints))
    elif args.mode == "hist":
        text = exp.hist_csv(psi, cfg.checkpoints)
    else:
        text = exp.corr_csv(psi)
    _emit(text, args.output)
    return EXIT_OK


def gradcheck_matrix(A, h: float = GRADCHECK_H):
    """Compare analytic and central-difference gradients of one matrix.

    A component passes when its relative deviation is below ``GRADCHECK_REL``
    or its absolute deviation below ``GRADCHECK_ABS`` (for components that
    vanish analytically). Returns ``(max_relative_deviation, ok, component)``,
    where ``component`` is the first failing index, or the index of the
    largest relative deviation when all pass.
    """
    a = gradient(A).as_vector()
    f = finite_difference_gradient(A, h).as_vector()
    diff = np.abs(a - f)
    mag = np.maximum(np.abs(a), np.abs(f))
    rel = np.where(mag > GRADCHECK_ABS, diff / np.where(mag > 0, mag, 1.0), 0.0)
    bad = (diff > GRADCHECK_ABS) & (rel >= GRADCHECK_REL)
    j = int(np.argmax(bad)) if bad.any() else int(np.argmax(rel))
    return float(rel.max()), not bad.any(), j


def cmd_gradcheck(args) -> int:
    if args.input:
        mats = [("input", load_matrix(args.input))]
    elif args.random:
        mats = [
            (f"sample {i}", sample_unitary(args.random, RngStream(args.seed, i)))
            for i in range(args.count)
        ]
    else:
        print("error: give an input file or --random N", file=sys.stderr)
        return EXIT_INPUT
    worst, ok, where = 0.0, True, None
    for label, A in mats:
        dev, good, j = gradcheck_matrix(A)
        if where is None or (ok and not good) or (good == ok and dev > worst):
            where = (label, j, A.shape[0])
        worst, ok = max(worst, dev), ok and good
    label, j, n = where
    comp = f"dlambda[{j}]" if j < n else f"drho[{j - n}]"
    print(
        f"gradcheck: {len(mats)} matrices, h={GRADCHECK_H:g}, max relative deviation {worst:.3e} "
        f"({'pass' if ok else 'FAIL'}; worst at {label}, {comp})"
    )
    return EXIT_OK if ok else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="line-sum residual tolerance")
    common.add_argument("--max-iter", type=int, default=None, help="iteration budget")
    common.add_argument("--no-escape", action="store_true", help="disable saddle escape and restarts")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(
        prog="unitscale",
        description="Scale unitary matrices to unit line sums and decompose them as Z X Z.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scale", parents=[common], help="scale one matrix")
    s.add_argument("input", help="Matrix JSON file")
    s.add_argument("--trace", default=None, help="trace CSV path (default: next to --output)")
    s.set_defaults(func=cmd_scale)

    d = sub.add_parser("decompose", parents=[common], help="ZXZ or XZXZXZ decomposition")
    d.add_argument("input", help="Matrix JSON file")
    d.add_argument("--form", choices=["zxz", "xzxzxz"], default="zxz")
    d.add_argument("--branch", choices=[b.value for b in Branch], default="first",
                   help="closed-form branch for 2x2 input")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("random", parents=[common], help="Haar-random unitaries as JSON lines")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--count", type=int, default=1)
    r.set_defaults(func=cmd_random)

    e = sub.add_parser("experiment", parents=[common], help="Monte Carlo potential statistics")
    e.add_argument("--mode", choices=["table1", "hist", "corr"], default="table1")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--checkpoints", default=",".join(map(str, exp.TABLE1_CHECKPOINTS)))
    e.add_argument("--workers", type=int, default=None)
    e.set_defaults(func=cmd_experiment)

    g = sub.add_parser("gradcheck", parents=[common], help="analytic vs finite-difference gradient")
    g.add_argument("input", nargs="?", default=None)
    g.add_argument("--random", type=int, default=None, metavar="N")
    g.add_argument("--count", type=int, default=100)
    g.set_defaults(func=cmd_gradcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, NonUnitaryInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
