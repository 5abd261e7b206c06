"""Feasible regions and their linear minimization oracles.

Each region answers lmo(g): an extreme point minimizing <g, s>. Oracles
return structured atoms (one-hot vectors, rank-1 matrices) so callers only
pay for dense storage when they materialize.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Atom", "DenseAtom", "BasisAtom", "RankOneAtom",
    "Box", "L1Ball", "VertexHull", "NuclearBall",
    "PowerIterationError",
]


class Atom:
    """A structured extreme point. dense() materializes it."""

    def dense(self):
        raise NotImplementedError


@dataclass(frozen=True)
class DenseAtom(Atom):
    point: np.ndarray

    def dense(self):
        return np.asarray(self.point, dtype=float)


@dataclass(frozen=True)
class BasisAtom(Atom):
    index: int
    value: float
    n: int

    def dense(self):
        out = np.zeros(self.n)
        out[self.index] = self.value
        return out


@dataclass(frozen=True)
class RankOneAtom(Atom):
    scale: float
    left: np.ndarray
    right: np.ndarray

    def dense(self):
        return self.scale * np.outer(self.left, self.right)


def _sign(v):
    # sign(0) := +1 for deterministic tie-breaking
    return np.where(np.asarray(v) >= 0.0, 1.0, -1.0)


class PowerIterationError(RuntimeError):
    def __init__(self, residual, iterations):
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(last relative residual {residual:.3e})")
        self.residual = residual


class Box:
    """Hypercube [-alpha, alpha]^n."""

    kind = "box"

    def __init__(self, alpha: float, n: int):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)
        self.n = int(n)

    def lmo(self, g) -> Atom:
        g = np.asarray(g, dtype=float)
        return DenseAtom(-self.alpha * _sign(g))

    def membership_violation(self, x) -> float:
        return float(max(0.0, np.max(np.abs(x)) - self.alpha))

    def diameter(self) -> float:
        return 2.0 * self.alpha * np.sqrt(self.n)


class L1Ball:
    """{x : ||x||_1 <= alpha}. Atoms are signed scaled basis vectors."""

    kind = "l1_ball"

    def __init__(self, alpha: float, n: int):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)
        self.n = int(n)

    def lmo(self, g) -> Atom:
        g = np.asarray(g, dtype=float)
        j = int(np.argmax(np.abs(g)))  # ties break at the lowest index
        return BasisAtom(j, -self.alpha * float(_sign(g[j])), self.n)

    def membership_violation(self, x) -> float:
        return float(max(0.0, np.sum(np.abs(x)) - self.alpha))

    def diameter(self) -> float:
        return 2.0 * self.alpha


class VertexHull:
    """Convex hull of an explicit vertex list."""

    kind = "vertex_hull"

    def __init__(self, vertices):
        vs = np.asarray(vertices, dtype=float)
        if vs.ndim != 2 or len(vs) < 1 or not np.all(np.isfinite(vs)):
            raise ValueError("need a nonempty 2-d array of finite vertices")
        self.vertices = vs
        self.n = vs.shape[1]

    def lmo(self, g) -> Atom:
        scores = self.vertices @ np.asarray(g, dtype=float)
        return DenseAtom(self.vertices[int(np.argmin(scores))].copy())

    def membership_violation(self, x) -> float:
        # Barycentric solve; only simplices (n+1 affinely independent
        # vertices) are supported, which covers every hull used here.
        vs = self.vertices
        if len(vs) != self.n + 1:
            raise ValueError("membership check unsupported for non-simplex hulls")
        m = np.vstack([vs.T, np.ones(len(vs))])
        rhs = np.append(np.asarray(x, dtype=float), 1.0)
        coeffs, residual, rank, _ = np.linalg.lstsq(m, rhs, rcond=None)
        if rank < len(vs):
            raise ValueError("membership check unsupported for degenerate hulls")
        recon = float(np.linalg.norm(m @ coeffs - rhs))
        v = float(max(0.0, -np.min(coeffs), recon))
        # snap solver noise to a clean zero for interior points
        return 0.0 if v < 1e-12 else v

    def diameter(self) -> float:
        vs = self.vertices
        d2 = np.sum((vs[:, None, :] - vs[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(np.max(d2)))


class NuclearBall:
    """{X : sum of singular values <= alpha} over n-by-m matrices."""

    kind = "nuclear_ball"

    def __init__(self, alpha: float, shape):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)
        self.shape = (int(shape[0]), int(shape[1]))

    def lmo(self, g, max_iter: int = 5000) -> Atom:
        g = np.asarray(g, dtype=float)
        if g.shape != self.shape:
            raise ValueError(f"gradient shape {g.shape} != region shape {self.shape}")
        if not np.any(g):
            # zero functional: any atom minimizes; fixed tie-break
            u = np.zeros(self.shape[0]); u[0] = 1.0
            v = np.zeros(self.shape[1]); v[0] = 1.0
            return RankOneAtom(-self.alpha, u, v)
        u, v = _top_singular_pair(g, max_iter)
        return RankOneAtom(-self.alpha, u, v)

    def membership_violation(self, x) -> float:
        sv = np.linalg.svd(np.asarray(x, dtype=float), compute_uv=False)
        return float(max(0.0, sv.sum() - self.alpha))

    def diameter(self) -> float:
        # ||X||_F <= ||X||_* <= alpha, so Frobenius distance <= 2 alpha
        return 2.0 * self.alpha


def _top_singular_pair(g, max_iter=5000, tol=1e-10):
    """Leading singular vectors of g by power iteration on g^T g.

    Start vector is the normalized row-sum of g^T g, with a fixed-seed
    random restart when that vector is degenerate.
    """
    gtg = g.T @ g
    v = gtg.sum(axis=1)
    nv = np.linalg.norm(v)
    if nv < 1e-300:
        v = np.random.default_rng(0).standard_normal(g.shape[1])
        nv = np.linalg.norm(v)
    v = v / nv
    rho = float(v @ (gtg @ v))
    rel = np.inf
    for it in range(1, max_iter + 1):
        w = gtg @ v
        nw = np.linalg.norm(w)
        if nw < 1e-300:
            v = np.random.default_rng(0).standard_normal(g.shape[1])
            v /= np.linalg.norm(v)
            continue
        v = w / nw
        rho_next = float(v @ (gtg @ v))
        rel = abs(rho_next - rho) / max(abs(rho_next), 1e-300)
        rho = rho_next
        if rel < tol:
            u = g @ v
            return u / np.linalg.norm(u), v
    raise PowerIterationError(rel, max_iter)
