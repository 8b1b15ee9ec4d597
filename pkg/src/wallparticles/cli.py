"""Command-line entry point: ``wallparticles <subcommand> ...``."""

from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from . import dynamics, gtpattern, io, kernels, matrixmodel
from . import rng as _rng
from .suite import TARGETS, run_target

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _floats(s: str) -> list[float]:
    try:
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}")


def _pos(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallparticles",
                                description="Particles with a wall, antisymmetric matrices and their kernels.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate-particles", help="dump particle trajectories as rep,t,i,x")
    sp.add_argument("--k", type=_pos, required=True)
    sp.add_argument("--steps", type=_nonneg, required=True)
    sp.add_argument("--reps", type=_pos, default=1)
    sp.add_argument("--seed", type=_nonneg, required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--jobs", type=_pos, default=1)

    sm = sub.add_parser("simulate-matrix", help="dump minor or spectral processes of the matrix walk")
    sm.add_argument("--k", type=_pos, required=True)
    sm.add_argument("--steps", type=_nonneg, required=True)
    sm.add_argument("--reps", type=_pos, default=1)
    sm.add_argument("--seed", type=_nonneg, required=True)
    sm.add_argument("--kind", choices=("minors", "spectrum"), default="minors")
    sm.add_argument("--out", default=None)
    sm.add_argument("--jobs", type=_pos, default=1)

    ek = sub.add_parser("eval-kernel", help="evaluate a closed-form kernel on a grid")
    ek.add_argument("--name", required=True,
                    choices=("phi", "phi_d", "q", "p_r", "a", "P", "Q", "d", "c", "gamma", "cdf"))
    ek.add_argument("--grid", type=_floats, default=[0.0])
    ek.add_argument("--grid2", type=_floats, default=None)
    ek.add_argument("--k", type=_pos, default=1)
    ek.add_argument("--m", type=int, default=0)
    ek.add_argument("--n", type=_pos, default=1)
    ek.add_argument("--r", type=float, default=0.0)
    ek.add_argument("--i", type=_pos, default=1)
    ek.add_argument("--j", type=_pos, default=1)
    ek.add_argument("--lam", type=_floats, default=None, help="fixed spectral point (P)")
    ek.add_argument("--y", type=_floats, default=None, help="fixed particle state (Q)")
    ek.add_argument("--raw", action="store_true", help="cdf: raw determinant instead of normalised")
    ek.add_argument("--out", default=None)

    sg = sub.add_parser("sample-gt", help="Gibbs samples of interlaced patterns as rep,row,idx,value")
    sg.add_argument("--k", type=_pos, required=True)
    sg.add_argument("--lam", type=_floats, required=True)
    sg.add_argument("--sweeps", type=_pos, default=200)
    sg.add_argument("--reps", type=_pos, default=1)
    sg.add_argument("--seed", type=_nonneg, required=True)
    sg.add_argument("--out", default=None)

    vf = sub.add_parser("verify", help="run verification targets and write a JSON report")
    vf.add_argument("--target", choices=TARGETS + ("all",), default=None)
    vf.add_argument("--seed", type=_nonneg, default=None)
    vf.add_argument("--config", default=None, help="JSON file with targets, seed, jobs, quick")
    vf.add_argument("--quick", action="store_true", help="tenfold smaller Monte Carlo sizes")
    vf.add_argument("--jobs", type=_pos, default=1)
    vf.add_argument("--out", default=None, help="JSON report path (default: stdout)")
    return p


def _cmd_simulate_particles(a):
    traj = dynamics.simulate_batch(a.k, a.steps, a.reps, a.seed, jobs=a.jobs)
    io.write_csv(a.out, ["rep", "t", "i", "x"], io.particle_rows(traj))
    return EXIT_OK


def _cmd_simulate_matrix(a):
    A = matrixmodel.run_process_batch(a.k, a.steps, a.reps, a.seed, jobs=a.jobs)
    if a.kind == "minors":
        vals = matrixmodel.minor_top_eigenvalues(A)
        io.write_csv(a.out, ["rep", "n", "m", "lambda1"], io.indexed_rows(vals, start_index=2))
    else:
        vals = matrixmodel.positive_eigenvalues(A)
        io.write_csv(a.out, ["rep", "n", "j", "lambda_j"], io.indexed_rows(vals))
    return EXIT_OK


def _pairs(a):
    g2 = a.grid2 if a.grid2 is not None else a.grid
    return list(itertools.product(a.grid, g2))


def _cmd_eval_kernel(a):
    name = a.name
    rows = []
    if name == "phi":
        header = ["x", "value"]
        rows = [(x, kernels.phi(x)) for x in a.grid]
    elif name == "phi_d":
        header = ["m", "x", "value"]
        rows = [(a.m, x, kernels.phi_d(a.m, x)) for x in a.grid]
    elif name == "q":
        header = ["x", "y", "value"]
        rows = [(x, y, kernels.q_kernel(x, y)) for x, y in _pairs(a)]
    elif name == "p_r":
        header = ["r", "x", "y", "value"]
        rows = [(a.r, x, y, kernels.p_r(a.r, x, y)) for x, y in _pairs(a) if x >= a.r and y >= a.r]
    elif name == "a":
        header = ["i", "j", "x", "xp", "value"]
        rows = [(a.i, a.j, x, y, kernels.a_coeff(a.i, a.j, x, y)) for x, y in _pairs(a)]
    elif name == "gamma":
        header = ["m", "t", "value"]
        rows = [(a.m, t, kernels.lower_inc_gamma_int(a.m, t)) for t in a.grid]
    elif name == "cdf":
        header = ["k", "n", "t", "value"]
        rows = [(a.k, a.n, t, kernels.cdf_last_particle(a.k, a.n, t, normalized=not a.raw)) for t in a.grid]
    elif name == "c":
        header = ["k", "value"]
        rows = [(a.k, kernels.c_const(a.k))]
    elif name in ("d", "P"):
        p = kernels.spectral_dim(a.k)
        pts = [(x,) for x in a.grid] if p == 1 else [v for v in _pairs(a) if v[0] > v[1] > 0]
        if p > 2:
            raise ValueError("grid evaluation supports k <= 4")
        cols = [f"b{t + 1}" for t in range(p)]
        if name == "d":
            header = ["k"] + cols + ["value"]
            rows = [(a.k, *b, kernels.d_func(a.k, b)) for b in pts]
        else:
            if a.lam is None:
                raise ValueError("P needs --lam")
            header = ["k"] + [f"l{t + 1}" for t in range(p)] + cols + ["value"]
            rows = [(a.k, *a.lam, *b, kernels.P_kernel(a.k, a.lam, b)) for b in pts if min(b) > 0]
    elif name == "Q":
        if a.k > 2:
            raise ValueError("grid evaluation supports k <= 2")
        if a.y is None:
            raise ValueError("Q needs --y")
        pts = [(x,) for x in a.grid] if a.k == 1 else [v for v in _pairs(a) if 0 <= v[0] <= v[1]]
        cols = [f"yp{t + 1}" for t in range(a.k)]
        header = ["k"] + [f"y{t + 1}" for t in range(a.k)] + cols + ["value"]
        rows = [(a.k, *a.y, *b, kernels.Q_kernel(a.k, a.y, b)) for b in pts]
    io.write_csv(a.out, header, rows)
    return EXIT_OK


def _cmd_sample_gt(a):
    lam = np.broadcast_to(np.asarray(a.lam, dtype=float), (a.reps, len(a.lam)))
    rows = gtpattern.gibbs_batch(a.k, lam, a.sweeps, _rng.NoiseStream(a.seed, _rng.stream_id(_rng.GT)))
    io.write_csv(a.out, ["rep", "row", "idx", "value"], io.pattern_rows(rows))
    return EXIT_OK


def _cmd_verify(a, parser):
    cfg = {}
    if a.config:
        with open(a.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    targets = cfg.get("targets") or ([a.target] if a.target else None)
    seed = a.seed if a.seed is not None else cfg.get("seed")
    if not targets:
        parser.error("verify needs --target or a config with 'targets'")
    if seed is None:
        parser.error("verify needs a seed (--seed or config 'seed')")
    quick = a.quick or bool(cfg.get("quick", False))
    jobs = int(cfg.get("jobs", a.jobs))
    reports = []
    for t in targets:
        if t not in TARGETS + ("all",):
            parser.error(f"unknown target {t!r}")
        reports.extend(run_target(t, int(seed), jobs=jobs, quick=quick))
    log = sys.stdout if a.out else sys.stderr
    for r in reports:
        print(next(r.lines()), file=log)
    io.write_json(a.out, [r.to_dict() for r in reports])
    ok = all(r.passed for r in reports if r.binding)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    try:
        if a.command == "simulate-particles":
            return _cmd_simulate_particles(a)
        if a.command == "simulate-matrix":
            return _cmd_simulate_matrix(a)
        if a.command == "eval-kernel":
            return _cmd_eval_kernel(a)
        if a.command == "sample-gt":
            return _cmd_sample_gt(a)
        if a.command == "verify":
            return _cmd_verify(a, parser)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
