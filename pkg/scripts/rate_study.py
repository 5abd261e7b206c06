"""Convergence-rate study on the two toy problems.

Prints, per tableau: the log-log slope of the duality gap on the triangle
(upper-bound side) and the band of k * sup-envelope(|x|) on the interval
toy (lower-bound side). Slow: the interval runs are 1e5 iterations each.
"""
import numpy as np

from rkfw import (SolverConfig, TABLEAU_NAMES, fit_rate_slope, make_scalar_huber,
                  make_tableau, make_triangle, run, sup_envelope_all)


def main():
    tri = make_triangle()
    toy = make_scalar_huber(epsilon=1e-6)
    print(f"{'tableau':9s}  {'gap slope':>9s}  {'k*env min':>10s}  {'k*env max':>10s}")
    for name in TABLEAU_NAMES:
        cfg = SolverConfig(tableau=make_tableau(name), c=2.0, delta=1.0, max_iters=10000)
        slope = fit_rate_slope(run(tri, cfg).gaps, 100, 10000)

        cfg = SolverConfig(tableau=make_tableau(name), c=2.0, delta=1.0,
                           max_iters=100000, record_iterates=True)
        traj = run(toy, cfg)
        env = sup_envelope_all(np.abs(np.array(traj.iterates)).ravel())
        ks = np.arange(1000, 100001)
        band = ks * env[1000:100001]
        print(f"{name:9s}  {slope:9.3f}  {band.min():10.3g}  {band.max():10.3g}")


if __name__ == "__main__":
    main()
