"""Multistep Frank-Wolfe steppers and the run loop.

One iteration at index k advances through the tableau's stages: each stage
evaluates the gradient at a partially advanced point, queries the region's
linear oracle, and scales the pull toward that atom by the schedule
fraction delta*c / (c + delta*(k + offset)). The weighted stage sum is the
composite update. With the one-stage identity tableau at delta = 1 this
reduces to the classic step x + gamma (s - x), gamma = c/(c + k).

Variants:
  plain        the composite update as-is
  line_search  searches along the composite direction; never lets f increase
  momentum     gradient-averaged oracle scheme (one-stage tableau only)
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .tableau import ButcherTableau, stage_gammas, validate_tableau

__all__ = [
    "SolverConfig", "Trajectory", "StageState",
    "rk_fw_step", "fw_gap", "line_search_gamma", "momentum_step", "run",
]

VARIANTS = ("plain", "line_search", "momentum")


@dataclass
class SolverConfig:
    tableau: ButcherTableau
    c: float = 2.0
    delta: float = 1.0
    max_iters: int = 100
    variant: str = "plain"
    ls_tol: float = 1e-10
    record_iterates: bool = False

    def validate(self):
        bad = validate_tableau(self.tableau)
        if bad:
            raise ValueError(f"invalid tableau: {'; '.join(bad)}")
        if self.c < 1.0:
            raise ValueError("schedule constant c must be >= 1")
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "momentum":
            if self.tableau.q != 1 or np.any(self.tableau.a != 0.0):
                raise ValueError("momentum is defined for the one-stage scheme only")
            if self.delta != 1.0:
                raise ValueError("momentum is defined at delta = 1 only")


@dataclass
class StageState:
    """Per-stage intermediates of one step, kept for diagnostics."""
    xbar: list
    atoms: list
    xi: list
    gap_at_start: float


@dataclass
class Trajectory:
    ks: np.ndarray
    ts: np.ndarray
    fs: np.ndarray
    gaps: np.ndarray
    step_norms: np.ndarray
    violations: np.ndarray
    wall_ns: np.ndarray
    c: float
    delta: float
    tableau_name: str
    variant: str
    label: str = ""
    f_star: Optional[float] = None
    iterates: Optional[list] = None

    def h(self) -> np.ndarray:
        """Objective above the known optimum."""
        if self.f_star is None:
            raise ValueError("trajectory has no recorded optimum")
        return self.fs - self.f_star

    def write_csv(self, fh):
        fh.write("k,t,f,gap,step_norm,violation,wall_ns\n")
        for i in range(len(self.ks)):
            fh.write(f"{int(self.ks[i])},{float(self.ts[i])!r},"
                     f"{float(self.fs[i])!r},{float(self.gaps[i])!r},"
                     f"{float(self.step_norms[i])!r},"
                     f"{float(self.violations[i])!r},{int(self.wall_ns[i])}\n")

    def write_iterates(self, fh):
        if self.iterates is None:
            raise ValueError("run did not record iterates")
        for x in self.iterates:
            fh.write(" ".join(repr(float(v)) for v in np.asarray(x).reshape(-1)))
            fh.write("\n")


def rk_fw_step(x, k: int, cfg: SolverConfig, problem):
    """One composite step from x at iteration index k.

    Returns (x_next, StageState). Stage i sees the point advanced by the
    tableau row, x + sum_j a[i][j] xi_j, and pulls toward its own oracle
    answer with fraction delta*c/(c + delta*(k + offset_i)).
    """
    t = cfg.tableau
    obj, region = problem.objective, problem.region
    gammas = stage_gammas(t, cfg.c, cfg.delta, k)
    xi, xbars, atoms = [], [], []
    gap0 = 0.0
    for i in range(t.q):
        xb = np.array(x, dtype=float, copy=True)
        for j in range(i):
            if t.a[i, j] != 0.0:
                xb += t.a[i, j] * xi[j]
        if not np.all(np.isfinite(xb)):
            raise ArithmeticError(f"non-finite state at stage {i}, iteration {k}")
        g = obj.gradient(xb)
        atom = region.lmo(g)
        sd = atom.dense()
        if i == 0:
            gap0 = float(np.vdot(g, xb - sd))
        xi.append(gammas[i] * (sd - xb))
        xbars.append(xb)
        atoms.append(atom)
    x_next = np.array(x, dtype=float, copy=True)
    for i in range(t.q):
        x_next += t.weights[i] * xi[i]
    return x_next, StageState(xbars, atoms, xi, gap0)


def fw_gap(x, problem) -> float:
    """Duality gap <grad f(x), x - s> at a feasible point."""
    if problem.region.membership_violation(x) > 1e-6:
        raise ValueError("point is not feasible")
    g = problem.objective.gradient(x)
    s = problem.region.lmo(g).dense()
    return float(np.vdot(g, np.asarray(x, dtype=float) - s))


def _largest_nonincreasing_step(value, x, d, fx, tol):
    """Largest gamma in [0, 1] with f(x + gamma d) <= f(x).

    Grid scan (33 points) to bracket the last sign change of
    phi(gamma) = f(x + gamma d) - f(x), then bisection to width tol.
    phi can dip and recover, so the grid guards against stopping at an
    early pocket. Always >= 0; equals 0 for ascent directions.
    """
    def phi(gm):
        return value(x + gm * d) - fx

    if phi(1.0) <= 0.0:
        return 1.0
    grid = np.linspace(0.0, 1.0, 33)
    vals = [phi(gm) for gm in grid]
    idx = max(i for i in range(33) if vals[i] <= 0.0)  # i=0 always qualifies
    if idx == 32:
        return 1.0
    lo, hi = grid[idx], grid[idx + 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return float(lo)


def line_search_gamma(x, d, k: int, c: float, objective, tol: float = 1e-10) -> float:
    """Searched step: max of the open-loop fraction c/(c+k) and the largest
    non-increasing step along d. Clipped to [0, 1]."""
    gbar = _largest_nonincreasing_step(objective.value, np.asarray(x, dtype=float),
                                       np.asarray(d, dtype=float),
                                       objective.value(x), tol)
    return float(min(1.0, max(c / (c + k), gbar)))


def momentum_step(x, z, v, k: int, c: float, problem):
    """Gradient-averaged oracle step with fraction gamma = c/(c+k).

    The running average z of gradients feeds the oracle instead of the
    instantaneous gradient; x and the oracle answer v mix with the same
    fraction, so x stays a convex combination of feasible points.
    """
    gamma = c / (c + k)
    x = np.asarray(x, dtype=float)
    y = (1.0 - gamma) * x + gamma * np.asarray(v, dtype=float)
    z_next = (1.0 - gamma) * np.asarray(z, dtype=float) + gamma * problem.objective.gradient(y)
    v_next = problem.region.lmo(z_next).dense()
    x_next = (1.0 - gamma) * x + gamma * v_next
    return x_next, z_next, v_next


def _row_gap(x, problem):
    g = problem.objective.gradient(x)
    s = problem.region.lmo(g).dense()
    return float(np.vdot(g, x - s))


def run(problem, cfg: SolverConfig, x0=None) -> Trajectory:
    """Drive cfg.max_iters steps from x0 (problem.x0 when omitted).

    Records one row per visited point, k = 0..max_iters. Under
    line_search the recorded f values never increase: the searched step is
    taken only when it does not raise f, otherwise the step falls back to
    the largest non-increasing fraction along the same direction.
    """
    cfg.validate()
    x = np.array(problem.x0 if x0 is None else x0, dtype=float)
    if problem.region.membership_violation(x) > 1e-9:
        raise ValueError("x0 is not feasible")

    obj, region = problem.objective, problem.region
    n_rows = cfg.max_iters + 1
    ks = np.arange(n_rows)
    ts = ks * cfg.delta
    fs = np.empty(n_rows)
    gaps = np.empty(n_rows)
    step_norms = np.zeros(n_rows)
    violations = np.empty(n_rows)
    wall = np.zeros(n_rows, dtype=np.int64)
    iterates = [] if cfg.record_iterates else None

    if cfg.variant == "momentum":
        z = np.asarray(obj.gradient(x), dtype=float)
        v = region.lmo(z).dense()

    t0 = time.perf_counter_ns()
    for k in range(cfg.max_iters + 1):
        fs[k] = obj.value(x)
        violations[k] = region.membership_violation(x)
        if iterates is not None:
            iterates.append(x.copy())
        if k == cfg.max_iters:
            gaps[k] = _row_gap(x, problem)
            wall[k] = time.perf_counter_ns() - t0
            break

        if cfg.variant == "plain":
            x_next, st = rk_fw_step(x, k, cfg, problem)
            gaps[k] = st.gap_at_start
        elif cfg.variant == "line_search":
            x_plain, st = rk_fw_step(x, k, cfg, problem)
            gaps[k] = st.gap_at_start
            gamma_k = cfg.delta * cfg.c / (cfg.c + cfg.delta * k)
            d = (x_plain - x) / gamma_k
            fx = fs[k]
            gbar = _largest_nonincreasing_step(obj.value, x, d, fx, cfg.ls_tol)
            step = min(1.0, max(cfg.c / (cfg.c + k), gbar))
            x_next = x + step * d
            if obj.value(x_next) > fx:
                # monotone fallback: gbar never raises f by construction
                x_next = x + gbar * d
        else:  # momentum
            gaps[k] = _row_gap(x, problem)
            x_next, z, v = momentum_step(x, z, v, k, cfg.c, problem)

        step_norms[k] = float(np.linalg.norm((x_next - x).reshape(-1)))
        wall[k] = time.perf_counter_ns() - t0
        x = x_next

    return Trajectory(
        ks=ks, ts=ts, fs=fs, gaps=gaps, step_norms=step_norms,
        violations=violations, wall_ns=wall, c=cfg.c, delta=cfg.delta,
        tableau_name=cfg.tableau.name, variant=cfg.variant,
        label=getattr(problem, "label", ""), f_star=problem.f_star,
        iterates=iterates,
    )
