"""Experiment plumbing: config files, dataset loaders, and the sweep runner.

Config files are flat `key = value` text with `#` comments. Every artifact
a run produces lands in a per-run directory together with a manifest that,
fed back through `sweep`, reproduces the run (timing column aside).
"""

import dataclasses
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import zigzag_energy
from .flow import reference_trajectory, total_accumulation_error
from .problems import (make_logistic, make_matrix_completion, make_scalar_huber,
                       make_sensing, make_sensing_logistic, make_triangle)
from .solvers import VARIANTS, SolverConfig, run
from .tableau import resolve_tableau

__all__ = [
    "ExperimentConfig", "parse_config", "render", "load_svmlight",
    "load_movielens", "build_problem", "run_experiment", "PROBLEM_NAMES",
]

PROBLEM_NAMES = ("triangle", "scalar_huber", "sensing", "sensing_logistic",
                 "logistic", "completion")


@dataclass
class ExperimentConfig:
    """One experiment: a problem, one or more methods, and output knobs.

    `tableau` holds several names for a sweep; everything else is shared
    across the fanned-out runs.
    """
    problem: str
    tableau: tuple = ("euler",)
    variant: str = "plain"
    c: float = 2.0
    delta: float = 1.0
    iters: int = 100
    seed: int = 0
    windows: tuple = (5, 20)
    ref_delta: float = None
    record_iterates: bool = False
    ls_tol: float = 1e-10
    out_dir: str = "runs"
    jobs: int = 1
    # problem parameters; each problem reads the subset it understands
    x_star: tuple = (0.2, 0.3)
    epsilon: float = 0.5
    m: int = 500
    n: int = 100
    sparsity: float = 0.10
    noise_sd: float = 0.05
    alpha: float = 1000.0
    rho: float = 10.0
    data: str = None


_INT_KEYS = {"iters", "seed", "m", "n", "jobs"}
_FLOAT_KEYS = {"c", "delta", "ls_tol", "epsilon", "sparsity", "noise_sd",
               "alpha", "rho", "ref_delta"}
_STR_KEYS = {"problem", "variant", "out_dir", "data"}
_BOOL_KEYS = {"record_iterates"}
_KNOWN_KEYS = (_INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _BOOL_KEYS
               | {"tableau", "windows", "x_star"})


def _convert(key, text, lineno):
    try:
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _BOOL_KEYS:
            low = text.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if key == "tableau":
            return tuple(tok.strip() for tok in text.split(",") if tok.strip())
        if key == "windows":
            return tuple(int(tok) for tok in text.split(","))
        if key == "x_star":
            return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(
            f"line {lineno}: malformed value for {key}: {text!r}") from None
    return text


def parse_config(text) -> ExperimentConfig:
    """Parse `key = value` lines into a typed config with defaults filled in."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ValueError(f"unknown key: {key}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key: {key}")
        values[key] = _convert(key, rest.strip(), lineno)
    if "problem" not in values:
        raise ValueError("missing required key: problem")
    return ExperimentConfig(**values)


def render(cfg: ExperimentConfig) -> str:
    """Inverse of parse_config: parse_config(render(cfg)) == cfg."""
    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, tuple):
            v = ",".join(repr(e) if isinstance(e, float) else str(e) for e in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def load_svmlight(path):
    """Read `label idx:val ...` lines into a dense matrix and a label vector.

    Indices are 1-based. Labels may be -1/1 or 0/1; zeros map to -1. Column
    count is the largest index seen anywhere in the file.
    """
    rows, labels, width = [], [], 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            try:
                lab = float(toks[0])
            except ValueError:
                raise ValueError(
                    f"line {lineno}: non-numeric label {toks[0]!r}") from None
            if lab not in (-1.0, 0.0, 1.0):
                raise ValueError(
                    f"line {lineno}: label must be one of -1, 0, 1, got {toks[0]}")
            entries = {}
            for tok in toks[1:]:
                idx_s, sep, val_s = tok.partition(":")
                if not sep:
                    raise ValueError(
                        f"line {lineno}: expected idx:val, got {tok!r}")
                try:
                    idx = int(idx_s)
                except ValueError:
                    raise ValueError(
                        f"line {lineno}: non-numeric index {idx_s!r}") from None
                if idx < 1:
                    raise ValueError(f"line {lineno}: index must be >= 1")
                try:
                    entries[idx - 1] = float(val_s)
                except ValueError:
                    raise ValueError(
                        f"line {lineno}: non-numeric value {val_s!r}") from None
            labels.append(-1.0 if lab == 0.0 else lab)
            rows.append(entries)
            width = max(width, 1 + max(entries, default=-1))
    if not rows:
        warnings.warn(f"{path}: empty svmlight file")
        return np.zeros((0, 0)), np.zeros(0)
    features = np.zeros((len(rows), width))
    for i, entries in enumerate(rows):
        for j, v in entries.items():
            features[i, j] = v
    return features, np.asarray(labels)


def load_movielens(path):
    """Read tab-separated `user item rating timestamp` rows, 1-based ids.

    Returns (user-1, item-1, raw rating) triples; recentring to a 0 mean
    scale happens at problem construction, not here.
    """
    triples = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            parts = raw.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise ValueError(
                    f"line {lineno}: expected 4 tab-separated fields, got {len(parts)}")
            try:
                user, item, rating = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ValueError(
                    f"line {lineno}: non-numeric field in {raw.strip()!r}") from None
            if user < 1 or item < 1:
                raise ValueError(f"line {lineno}: ids are 1-based")
            if not 1.0 <= rating <= 5.0:
                raise ValueError(f"line {lineno}: rating {rating} outside [1, 5]")
            if (user, item) in seen:
                raise ValueError(
                    f"line {lineno}: duplicate rating for (user {user}, item {item})")
            seen.add((user, item))
            triples.append((user - 1, item - 1, rating))
    return triples


def build_problem(cfg: ExperimentConfig):
    name = cfg.problem
    if name == "triangle":
        return make_triangle(cfg.x_star)
    if name == "scalar_huber":
        return make_scalar_huber(cfg.epsilon)
    if name == "sensing":
        return make_sensing(cfg.m, cfg.n, cfg.sparsity, cfg.noise_sd,
                            cfg.alpha, cfg.seed)
    if name == "sensing_logistic":
        return make_sensing_logistic(cfg.m, cfg.n, cfg.sparsity, cfg.noise_sd,
                                     cfg.alpha, cfg.seed)
    if name == "logistic":
        if cfg.data is None:
            raise ValueError("problem 'logistic' needs data = <svmlight path>")
        features, labels = load_svmlight(cfg.data)
        return make_logistic(features, labels, cfg.alpha)
    if name == "completion":
        if cfg.data is None:
            raise ValueError("problem 'completion' needs data = <ratings path>")
        triples = load_movielens(cfg.data)
        if not triples:
            raise ValueError(f"{cfg.data}: no ratings")
        shape = (1 + max(r for r, _, _ in triples),
                 1 + max(c for _, c, _ in triples))
        return make_matrix_completion(triples, shape, cfg.alpha, cfg.rho)
    raise ValueError(f"unknown problem: {name} (expected one of {', '.join(PROBLEM_NAMES)})")


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("rkfw")
    except Exception:
        return "0+unknown"


def _one_run(problem, solver_cfg: SolverConfig, cfg: ExperimentConfig,
             out_root: Path) -> dict:
    run_dir = out_root / f"{solver_cfg.tableau.name}_{solver_cfg.variant}"
    run_dir.mkdir(parents=True, exist_ok=True)
    traj = run(problem, solver_cfg)
    with open(run_dir / "traj.csv", "w") as fh:
        traj.write_csv(fh)
    if cfg.record_iterates:
        with open(run_dir / "iterates.txt", "w") as fh:
            traj.write_iterates(fh)
    for w in cfg.windows:
        if w >= 2 and len(traj.iterates) >= w + 1:
            report = zigzag_energy(traj.iterates, w, delta=cfg.delta)
            with open(run_dir / f"zigzag_w{w}.csv", "w") as fh:
                report.write_csv(fh)
    if cfg.ref_delta is not None:
        ref = reference_trajectory(problem, cfg.c, cfg.ref_delta,
                                   t_end=cfg.iters * cfg.delta)
        pairs = total_accumulation_error(traj, ref)
        with open(run_dir / "tae.csv", "w") as fh:
            fh.write("t,epsilon\n")
            for t, eps in pairs:
                fh.write(f"{t!r},{eps!r}\n")
    # manifest pins this single run: same config, tableau narrowed to one
    single = dataclasses.replace(cfg, tableau=(solver_cfg.tableau.name,),
                                 out_dir=str(out_root))
    with open(run_dir / "manifest.txt", "w") as fh:
        fh.write(f"# rkfw {_version()}\n")
        fh.write(render(single))
    return {
        "run": run_dir.name,
        "tableau": solver_cfg.tableau.name,
        "variant": solver_cfg.variant,
        "final_f": float(traj.fs[-1]),
        "best_f": float(traj.fs.min()),
        "final_gap": float(traj.gaps[-1]),
        "max_violation": float(traj.violations.max()),
    }


def run_experiment(cfg: ExperimentConfig) -> int:
    """Fan a config out into runs; write artifacts under cfg.out_dir.

    Method specs are validated before any problem is built, so a bad
    variant/tableau pairing fails before touching data or compute.
    """
    if cfg.variant not in VARIANTS:
        raise ValueError(f"unknown variant: {cfg.variant}")
    solver_cfgs = []
    for name in cfg.tableau:
        sc = SolverConfig(tableau=resolve_tableau(name), c=cfg.c,
                          delta=cfg.delta, max_iters=cfg.iters,
                          variant=cfg.variant, ls_tol=cfg.ls_tol,
                          record_iterates=True)
        sc.validate()
        solver_cfgs.append(sc)
    if not solver_cfgs:
        raise ValueError("config names no tableau")
    if cfg.data is not None and not os.path.exists(cfg.data):
        raise FileNotFoundError(f"data file not found: {cfg.data}")
    problem = build_problem(cfg)
    out_root = Path(cfg.out_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    if cfg.jobs > 1 and len(solver_cfgs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_one_run, problem, sc, cfg, out_root)
                       for sc in solver_cfgs]
            rows = [f.result() for f in futures]
    else:
        rows = [_one_run(problem, sc, cfg, out_root) for sc in solver_cfgs]
    if len(rows) > 1:
        f_star_proxy = min(r["best_f"] for r in rows)
        with open(out_root / "summary.csv", "w") as fh:
            fh.write("# f_star_proxy is the min f over these runs, not a true optimum\n")
            fh.write("run,tableau,variant,final_f,best_f,final_gap,max_violation,f_star_proxy\n")
            for r in rows:
                fh.write(f"{r['run']},{r['tableau']},{r['variant']},"
                         f"{r['final_f']!r},{r['best_f']!r},{r['final_gap']!r},"
                         f"{r['max_violation']!r},{f_star_proxy!r}\n")
    return 0
