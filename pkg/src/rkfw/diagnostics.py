"""Trajectory diagnostics: zig-zag energy, tail envelopes, rate slopes,
and the per-step decrease bound check.
"""

from dataclasses import dataclass

import numpy as np

from .tableau import ButcherTableau, stage_gammas

__all__ = [
    "ZigzagReport", "zigzag_energy", "sup_envelope", "sup_envelope_all",
    "fit_rate_slope", "DecreaseBoundParams", "decrease_bound_check",
]


@dataclass
class ZigzagReport:
    window: int
    block_energies: np.ndarray
    mean_energy: float
    delta: float
    time_span: float

    def write_csv(self, fh):
        fh.write("block_start_k,energy\n")
        for b, e in enumerate(self.block_energies):
            fh.write(f"{b * self.window},{float(e)!r}\n")
        fh.write(f"# mean,{float(self.mean_energy)!r}\n")


def zigzag_energy(iterates, window: int, delta: float = 1.0) -> ZigzagReport:
    """Mean sideways motion per block of `window` consecutive steps.

    Each block spans iterates x(k)..x(k+W). The interior step directions
    are projected off the block's net displacement; what survives is
    direction churn that produced no net progress. Blocks are disjoint, a
    trailing partial block is dropped, and a block with no net displacement
    (below 1e-14) keeps its steps unprojected rather than dividing by zero.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    pts = [np.asarray(x, dtype=float).reshape(-1) for x in iterates]
    if len(pts) < window + 1:
        raise ValueError(f"need at least {window + 1} iterates, got {len(pts)}")
    n_steps = len(pts) - 1
    energies = []
    for k0 in range(0, n_steps - window + 1, window):
        dbar = pts[k0 + window] - pts[k0]
        nrm2 = float(dbar @ dbar)
        degenerate = np.sqrt(nrm2) < 1e-14
        total = 0.0
        for i in range(k0 + 1, k0 + window):
            d = pts[i + 1] - pts[i]
            if degenerate:
                resid = d
            else:
                # Q d = d - dbar (dbar.d)/|dbar|^2, applied via inner products
                resid = d - dbar * (float(dbar @ d) / nrm2)
            total += float(np.linalg.norm(resid))
        energies.append(total / (window - 1))
    energies = np.asarray(energies)
    return ZigzagReport(window, energies, float(energies.mean()), delta,
                        n_steps * delta)


def sup_envelope(series, k: int) -> float:
    """max |series[k']| over k' >= k."""
    tail = np.abs(np.asarray(series, dtype=float)[k:])
    if tail.size == 0:
        raise IndexError("k out of range")
    return float(tail.max())


def sup_envelope_all(series) -> np.ndarray:
    """sup_envelope at every index, one backward pass."""
    return np.maximum.accumulate(np.abs(np.asarray(series, dtype=float))[::-1])[::-1]


def fit_rate_slope(values, k_min: int, k_max: int) -> float:
    """Least-squares slope of log values[k] against log k over [k_min, k_max].

    values is indexed by iteration (values[k] belongs to k), so a pure
    power law a * k^(-r) comes back as slope -r.
    """
    v = np.asarray(values, dtype=float)
    if not 1 <= k_min < k_max < len(v):
        raise ValueError("need 1 <= k_min < k_max < len(values)")
    ks = np.arange(k_min, k_max + 1)
    seg = v[k_min:k_max + 1]
    nonpos = np.nonzero(seg <= 0.0)[0]
    if nonpos.size:
        raise ValueError(f"nonpositive value at k={int(ks[nonpos[0]])}")
    slope, _ = np.polyfit(np.log(ks), np.log(seg), 1)
    return float(slope)


@dataclass
class DecreaseBoundParams:
    """Constants for the one-step decrease inequality of a q-stage scheme.

    d4 bounds the second-order term of a composite step: with c1 = q * p_max
    (p_max the largest column norm of the first-iteration mixing matrix) and
    c2 = q * max |a_ij|, displacement and curvature radii are d2 = c1 * d
    and d3 = c2 * c1 * d, giving
        d4 = (l * d2^2 + 2 l * d2 * d3 + 2 * l2 * d3) / 2.
    """
    l: float
    l2: float
    d: float
    p_max: float
    q: int
    a_max: float

    @property
    def c1(self):
        return self.q * self.p_max

    @property
    def c2(self):
        return self.q * self.a_max

    @property
    def d2(self):
        return self.c1 * self.d

    @property
    def d3(self):
        return self.c2 * self.c1 * self.d

    @property
    def d4(self):
        return (self.l * self.d2 ** 2 + 2 * self.l * self.d2 * self.d3
                + 2 * self.l2 * self.d3) / 2

    @classmethod
    def for_tableau(cls, t: ButcherTableau, c: float, l: float, l2: float,
                    d: float) -> "DecreaseBoundParams":
        gammas = stage_gammas(t, c, 1.0, 1)
        m = np.eye(t.q) + gammas[:, None] * t.a
        p = np.linalg.solve(m, np.diag(gammas)).T
        p_max = float(np.max(np.linalg.norm(p, axis=0)))  # max column norm
        return cls(l=l, l2=l2, d=d, p_max=p_max, q=t.q,
                   a_max=float(np.max(np.abs(t.a))))


def decrease_bound_check(traj, params: DecreaseBoundParams, c: float):
    """Indices k >= 1 where the per-step decrease inequality fails.

    Checks h(k+1) - h(k) <= -gamma h(k) + d4 gamma^2 + 1e-9 with
    gamma = c/(c + k + 1) and h the objective above the known optimum.
    """
    h = traj.h()
    d4 = params.d4
    out = []
    for k in range(1, len(h) - 1):
        gamma = c / (c + k + 1)
        if h[k + 1] - h[k] > -gamma * h[k] + d4 * gamma * gamma + 1e-9:
            out.append(k)
    return out
