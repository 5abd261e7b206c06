"""Command line front end, one verb per artifact kind.

certify  stage-coefficient certificates for a tableau
solve    one configured run (trajectory CSV plus diagnostics)
zigzag   energy report from an iterate dump
tae      trajectory error against a fine-step reference
sweep    config-driven multi-run with a comparison summary
"""

import argparse
import dataclasses
import io
import sys
from pathlib import Path

import numpy as np

from .diagnostics import zigzag_energy
from .flow import reference_trajectory, total_accumulation_error
from .harness import (PROBLEM_NAMES, ExperimentConfig, build_problem,
                      parse_config, run_experiment)
from .solvers import VARIANTS, SolverConfig, run
from .tableau import feasibility_certificate, resolve_tableau

__all__ = ["main"]


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _ints(text):
    return tuple(int(tok) for tok in text.split(","))


def _floats(text):
    return tuple(float(tok) for tok in text.split(","))


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--problem", required=True, choices=PROBLEM_NAMES)
    p.add_argument("--tableau", default="euler",
                   help="builtin name, comma list, or tableau file path")
    p.add_argument("--variant", default="plain", choices=VARIANTS)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="runs")
    p.add_argument("--windows", default="5,20")
    p.add_argument("--ref-delta", type=float,
                   help="also write tae.csv against a reference this fine")
    p.add_argument("--record-iterates", action="store_true")
    p.add_argument("--ls-tol", type=float, default=1e-10)
    group = p.add_argument_group("problem parameters")
    group.add_argument("--x-star", default="0.2,0.3")
    group.add_argument("--epsilon", type=float, default=0.5)
    group.add_argument("--m", type=int, default=500)
    group.add_argument("--n", type=int, default=100)
    group.add_argument("--sparsity", type=float, default=0.10)
    group.add_argument("--noise-sd", type=float, default=0.05)
    group.add_argument("--alpha", type=float, default=1000.0)
    group.add_argument("--rho", type=float, default=10.0)
    group.add_argument("--data", help="svmlight or ratings file")


def _cfg_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        problem=args.problem,
        tableau=tuple(s.strip() for s in args.tableau.split(",") if s.strip()),
        variant=args.variant, c=args.c, delta=args.delta, iters=args.iters,
        seed=args.seed, windows=_ints(args.windows), ref_delta=args.ref_delta,
        record_iterates=args.record_iterates, ls_tol=args.ls_tol,
        out_dir=args.out_dir, x_star=_floats(args.x_star),
        epsilon=args.epsilon, m=args.m, n=args.n, sparsity=args.sparsity,
        noise_sd=args.noise_sd, alpha=args.alpha, rho=args.rho, data=args.data)


def _cmd_certify(args) -> int:
    t = resolve_tableau(args.tableau)
    rep = feasibility_certificate(t, args.c, args.delta, args.k_max)
    lines = ["k," + ",".join(f"z_{i + 1}" for i in range(t.q))]
    for k, z in rep.z_by_k:
        lines.append(f"{k}," + ",".join(repr(float(v)) for v in z))
    lines.append("# all stage coefficients in [0, 1]: "
                 + ("yes" if rep.all_in_unit_interval else "NO"))
    lines.append("# sup norm nonincreasing in k: "
                 + ("yes" if rep.sup_norm_monotone else "NO"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if rep.all_in_unit_interval else 1


def _cmd_solve(args) -> int:
    return run_experiment(_cfg_from_args(args))


def _cmd_zigzag(args) -> int:
    pts = np.loadtxt(args.iterates, ndmin=2)
    rep = zigzag_energy(pts, args.window, delta=args.delta)
    buf = io.StringIO()
    rep.write_csv(buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_tae(args) -> int:
    cfg = _cfg_from_args(args)
    if cfg.ref_delta is None:
        raise ValueError("tae needs --ref-delta")
    if len(cfg.tableau) != 1:
        raise ValueError("tae compares a single tableau against the reference")
    sc = SolverConfig(tableau=resolve_tableau(cfg.tableau[0]), c=cfg.c,
                      delta=cfg.delta, max_iters=cfg.iters,
                      variant=cfg.variant, ls_tol=cfg.ls_tol,
                      record_iterates=True)
    sc.validate()
    problem = build_problem(cfg)
    traj = run(problem, sc)
    ref = reference_trajectory(problem, cfg.c, cfg.ref_delta,
                               t_end=cfg.iters * cfg.delta)
    pairs = total_accumulation_error(traj, ref)
    lines = ["t,epsilon"] + [f"{t!r},{eps!r}" for t, eps in pairs]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_sweep(args) -> int:
    cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
    if args.jobs is not None:
        cfg = dataclasses.replace(cfg, jobs=args.jobs)
    return run_experiment(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rkfw",
        description="Multistage conditional-gradient runs and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="stage-coefficient certificates")
    p.add_argument("--tableau", required=True)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("solve", help="run one configuration")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("zigzag", help="energy report from an iterate dump")
    p.add_argument("--iterates", required=True,
                   help="whitespace-separated rows, one iterate per line")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_zigzag)

    p = sub.add_parser("tae", help="trajectory error against a reference")
    _add_run_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_tae)

    p = sub.add_parser("sweep", help="config-driven multi-run")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
