"""Objective oracles: value, analytic gradient, smoothness constants.

All oracles are immutable and pure. check_gradient compares the analytic
gradient against central finite differences and is used both as a test
oracle and as a constructor-time sanity hook.
"""

import numpy as np

__all__ = [
    "DistanceSq", "LeastSquares", "Logistic", "HuberScalar", "HuberMatrix",
    "check_gradient", "top_eigenvalue",
]


def top_eigenvalue(m, max_iter=5000, tol=1e-12):
    """Largest eigenvalue of a symmetric PSD matrix by power iteration."""
    m = np.asarray(m, dtype=float)
    v = m.sum(axis=1)
    nv = np.linalg.norm(v)
    if nv < 1e-300:
        v = np.random.default_rng(0).standard_normal(m.shape[0])
        nv = np.linalg.norm(v)
    v = v / nv
    lam = float(v @ (m @ v))
    for _ in range(max_iter):
        w = m @ v
        nw = np.linalg.norm(w)
        if nw < 1e-300:
            return 0.0
        v = w / nw
        lam_next = float(v @ (m @ v))
        if abs(lam_next - lam) <= tol * max(abs(lam_next), 1.0):
            return lam_next
        lam = lam_next
    return lam


class DistanceSq:
    """f(x) = 0.5 ||x - target||^2."""

    kind = "distance_sq"
    smoothness = 1.0
    grad_smoothness = 0.0  # gradient is affine

    def __init__(self, target):
        self.target = np.asarray(target, dtype=float)

    def value(self, x):
        d = np.asarray(x, dtype=float) - self.target
        return 0.5 * float(d @ d)

    def gradient(self, x):
        return np.asarray(x, dtype=float) - self.target


class LeastSquares:
    """f(x) = 0.5 ||G x - h||^2."""

    kind = "least_squares"
    grad_smoothness = 0.0

    def __init__(self, g, h):
        self.g = np.asarray(g, dtype=float)
        self.h = np.asarray(h, dtype=float)
        if self.g.shape[0] != len(self.h):
            raise ValueError("row count of G must match length of h")
        self.smoothness = top_eigenvalue(self.g.T @ self.g)

    def value(self, x):
        r = self.g @ np.asarray(x, dtype=float) - self.h
        return 0.5 * float(r @ r)

    def gradient(self, x):
        return self.g.T @ (self.g @ np.asarray(x, dtype=float) - self.h)


class Logistic:
    """Mean logistic loss (1/m) sum log(1 + exp(-y_i z_i^T x)), labels in {-1, 1}."""

    kind = "logistic"
    grad_smoothness = None  # not needed by any bound computed here

    def __init__(self, features, labels):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=float)
        if self.features.shape[0] != len(self.labels):
            raise ValueError("feature rows must match label count")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must lie in {-1, 1}")
        self.m = self.features.shape[0]
        # L = ||Z||_2^2 / (4m); top singular value squared = top eig of Z^T Z
        self.smoothness = top_eigenvalue(self.features.T @ self.features) / (4.0 * self.m)

    def _margins(self, x):
        return self.labels * (self.features @ np.asarray(x, dtype=float))

    def value(self, x):
        # log(1 + exp(-t)) = logaddexp(0, -t), stable for large |t|
        return float(np.logaddexp(0.0, -self._margins(x)).mean())

    def gradient(self, x):
        t = self._margins(x)
        # sigmoid(-t) without overflow on either tail
        s = np.empty_like(t)
        pos = t >= 0
        s[pos] = np.exp(-t[pos]) / (1.0 + np.exp(-t[pos]))
        s[~pos] = 1.0 / (1.0 + np.exp(t[~pos]))
        return -(self.features.T @ (self.labels * s)) / self.m


class HuberScalar:
    """One-dimensional smoothed absolute value.

    f(x) = x^2/2 for |x| < eps, eps|x| - eps^2/2 otherwise. The gradient is
    bounded by eps and 1-Lipschitz, which makes the interval problem's
    dynamics independent of eps until the iterate enters the quadratic cap.
    """

    kind = "huber_scalar"
    smoothness = 1.0
    grad_smoothness = 0.0  # piecewise-affine gradient, a.e.

    def __init__(self, eps):
        if not 0 < eps:
            raise ValueError("eps must be positive")
        self.eps = float(eps)

    def value(self, x):
        v = float(np.asarray(x).reshape(()))
        if abs(v) < self.eps:
            return 0.5 * v * v
        return self.eps * abs(v) - 0.5 * self.eps * self.eps

    def gradient(self, x):
        arr = np.asarray(x, dtype=float)
        v = float(arr.reshape(()))
        g = v if abs(v) < self.eps else self.eps * (1.0 if v >= 0 else -1.0)
        return np.full(arr.shape, g)

    def kink_distance(self, x):
        v = float(np.asarray(x).reshape(()))
        return abs(abs(v) - self.eps)


def _huber(t, rho):
    a = np.abs(t)
    return np.where(a <= rho, 0.5 * t * t, rho * (a - rho) + 0.5 * rho * rho)


def _huber_grad(t, rho):
    return np.clip(t, -rho, rho)


class HuberMatrix:
    """Huber-penalized completion residual over an observed index set.

    f(X) = sum over observed (i, j) of H(X_ij - R_ij), with H quadratic up
    to rho and linear beyond.
    """

    kind = "huber_matrix"
    grad_smoothness = 0.0

    def __init__(self, observed, ratings, rho, shape):
        obs = np.asarray(observed, dtype=int)
        if obs.ndim != 2 or obs.shape[1] != 2:
            raise ValueError("observed must be a list of (row, col) pairs")
        self.rows = obs[:, 0]
        self.cols = obs[:, 1]
        self.ratings = np.asarray(ratings, dtype=float)
        if len(self.ratings) != len(obs):
            raise ValueError("ratings count must match observed count")
        if rho <= 0:
            raise ValueError("rho must be positive")
        self.rho = float(rho)
        self.shape = (int(shape[0]), int(shape[1]))
        if len(obs) and (self.rows.max() >= self.shape[0] or self.cols.max() >= self.shape[1]
                         or self.rows.min() < 0 or self.cols.min() < 0):
            raise ValueError("observed index outside shape")
        self.smoothness = 1.0  # H'' <= 1

    def value(self, x):
        resid = np.asarray(x, dtype=float)[self.rows, self.cols] - self.ratings
        return float(_huber(resid, self.rho).sum())

    def gradient(self, x):
        resid = np.asarray(x, dtype=float)[self.rows, self.cols] - self.ratings
        out = np.zeros(self.shape)
        out[self.rows, self.cols] = _huber_grad(resid, self.rho)
        return out

    def kink_distance(self, x):
        resid = np.asarray(x, dtype=float)[self.rows, self.cols] - self.ratings
        return float(np.min(np.abs(np.abs(resid) - self.rho))) if len(resid) else np.inf


def check_gradient(objective, points, step=1e-6):
    """Max relative error between analytic and central-difference gradients.

    Points within 10*step of a known nondifferentiability surface are
    skipped (central differences are invalid there). Returns the max over
    all checked points and coordinates.
    """
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        if hasattr(objective, "kink_distance") and objective.kink_distance(x) < 10 * step:
            continue
        g = np.asarray(objective.gradient(x), dtype=float)
        flat = x.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.size):
            e = np.zeros_like(flat)
            e[i] = step
            fp = objective.value((flat + e).reshape(x.shape))
            fm = objective.value((flat - e).reshape(x.shape))
            num = (fp - fm) / (2 * step)
            err = abs(num - gflat[i]) / max(1.0, abs(gflat[i]))
            worst = max(worst, err)
    return worst
