import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rkfw.geometry import Box, DenseAtom
from rkfw.objectives import DistanceSq
from rkfw.problems import ProblemInstance, make_sensing, make_triangle
from rkfw.solvers import (SolverConfig, fw_gap, line_search_gamma,
                          momentum_step, rk_fw_step, run)
from rkfw.tableau import make_tableau


def scalar_box_problem(target=0.0):
    """f(x) = (x - target)^2 / 2 on [-1, 1]."""
    return ProblemInstance(
        objective=DistanceSq(np.array([target])),
        region=Box(1.0, 1),
        x0=np.array([1.0]),
        f_star=0.0,
        label="scalar_box",
    )


def cfg_for(name, **kw):
    return SolverConfig(tableau=make_tableau(name), **kw)


def test_euler_scalar_hand_step():
    p = scalar_box_problem()
    # k=2, c=2: gamma=1/2, gradient at 0.5 is positive so the atom is -1
    x_next, st_ = rk_fw_step(np.array([0.5]), 2, cfg_for("euler"), p)
    assert x_next == pytest.approx([-0.25], abs=0)
    assert len(st_.xi) == 1 and len(st_.atoms) == 1


def test_midpoint_scalar_hand_step_lands_on_zero():
    p = scalar_box_problem()
    # stage 0: xi0 = 0.5(-1-0.5) = -0.75; stage 1 sees 0.125, pulls with
    # gamma = 4/9 toward -1: xi1 = (4/9)(-9/8) = -1/2; weights (0,1)
    x_next, st_ = rk_fw_step(np.array([0.5]), 2, cfg_for("midpoint"), p)
    assert x_next[0] == 0.0
    assert st_.xi[0] == pytest.approx([-0.75], abs=0)
    assert st_.xbar[1] == pytest.approx([0.125], abs=0)


def test_triangle_first_step_hits_vertex():
    p = make_triangle()
    x_next, st_ = rk_fw_step(p.x0, 0, cfg_for("euler"), p)
    # gamma(0) = 1: the step lands exactly on the chosen vertex
    assert np.array_equal(x_next, [1.0, 0.0])
    assert st_.gap_at_start == pytest.approx(0.9)


@given(st.floats(-0.99, 0.99), st.integers(0, 50),
       st.sampled_from([1.0, 2.0, 4.0]))
def test_euler_step_equals_classic_update(x, k, c):
    p = scalar_box_problem()
    xv = np.array([x])
    x_next, _ = rk_fw_step(xv, k, cfg_for("euler", c=c), p)
    gamma = c / (c + k)
    g = p.objective.gradient(xv)
    s = p.region.lmo(g).dense()
    assert x_next == pytest.approx(xv + gamma * (s - xv), abs=1e-15)


@pytest.mark.parametrize("name", ["midpoint", "rk44", "rk38", "rk5"])
def test_stage_reconstruction_identity(name):
    p = make_triangle()
    t = make_tableau(name)
    x = np.array([0.1, 0.4])
    x_next, st_ = rk_fw_step(x, 3, cfg_for(name), p)
    recon = x + sum(t.weights[i] * st_.xi[i] for i in range(t.q))
    assert x_next == pytest.approx(recon, abs=1e-12)
    assert len(st_.xi) == t.q


def test_fw_gap_frozen_values():
    p = make_triangle()
    assert fw_gap(p.x0, p) == pytest.approx(0.9)
    assert fw_gap(np.array([0.2, 0.3]), p) == pytest.approx(0.0, abs=1e-12)


def test_fw_gap_rejects_infeasible():
    with pytest.raises(ValueError, match="not feasible"):
        fw_gap(np.array([2.0, 2.0]), make_triangle())


@given(st.floats(-0.9, 0.9), st.floats(-0.45, 0.45))
def test_fw_gap_dominates_suboptimality(a, b):
    p = make_triangle()
    x = np.array([a * 0.5, 0.25 + b * 0.5])
    if p.region.membership_violation(x) > 0:
        return
    h = p.objective.value(x) - 0.0
    assert fw_gap(x, p) >= h - 1e-12


def test_line_search_far_root():
    # phi(gamma) = ((0.5 - 1.5 g)^2 - 0.25)/2 has roots 0 and 2/3; the
    # searched step is the far root, not the minimizer 1/3
    obj = DistanceSq(np.array([0.0]))
    g = line_search_gamma(np.array([0.5]), np.array([-1.5]), k=2, c=2.0,
                          objective=obj)
    assert g == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_line_search_floor_is_schedule():
    obj = DistanceSq(np.array([0.0]))
    # ascent direction: gbar = 0, so the schedule fraction wins
    g = line_search_gamma(np.array([0.5]), np.array([1.0]), k=2, c=2.0,
                          objective=obj)
    assert g == pytest.approx(0.5, abs=1e-9)
    # at k=0 the floor is already the full step
    g = line_search_gamma(np.array([0.5]), np.array([1.0]), k=0, c=2.0,
                          objective=obj)
    assert g == 1.0


def test_line_search_full_step_shortcut():
    obj = DistanceSq(np.array([0.0]))
    g = line_search_gamma(np.array([0.5]), np.array([-0.5]), k=5, c=2.0,
                          objective=obj)
    assert g == 1.0


def test_run_row_count_and_columns():
    p = make_triangle()
    traj = run(p, cfg_for("euler", max_iters=7))
    assert len(traj.ks) == 8
    assert traj.ks[-1] == 7
    assert traj.step_norms[-1] == 0.0
    assert traj.fs[0] == pytest.approx(0.265)
    assert traj.gaps[0] == pytest.approx(0.9)
    assert np.all(traj.violations <= 1e-9)
    assert np.all(np.diff(traj.wall_ns) >= 0)


def test_run_zero_iters():
    p = make_triangle()
    traj = run(p, cfg_for("euler", max_iters=0))
    assert len(traj.fs) == 1
    assert traj.gaps[0] == pytest.approx(0.9)


def test_run_rejects_infeasible_start():
    with pytest.raises(ValueError, match="not feasible"):
        run(make_triangle(), cfg_for("euler"), x0=np.array([2.0, 2.0]))


def test_trajectory_h_requires_optimum():
    p = make_sensing(m=15, n=4, seed=0, alpha=3.0)
    traj = run(p, cfg_for("euler", max_iters=3))
    with pytest.raises(ValueError, match="optimum"):
        traj.h()
    t2 = run(make_triangle(), cfg_for("euler", max_iters=3))
    assert np.array_equal(t2.h(), t2.fs)


def test_line_search_run_is_monotone_triangle():
    p = make_triangle()
    traj = run(p, cfg_for("euler", variant="line_search", max_iters=200))
    assert np.all(np.diff(traj.fs) <= 1e-12)


def test_line_search_run_is_monotone_sensing():
    p = make_sensing(m=30, n=8, seed=2, alpha=50.0)
    for name in ("euler", "rk44"):
        traj = run(p, cfg_for(name, variant="line_search", max_iters=60))
        assert np.all(np.diff(traj.fs) <= 1e-12), name


def test_line_search_fallback_keeps_monotone():
    # from 0.9 at k=0 the schedule forces gamma=1, which would overshoot to
    # f(-1) > f(0.9); the fallback rescales to the non-increasing root
    p = scalar_box_problem()
    traj = run(p, cfg_for("euler", variant="line_search", max_iters=3),
               x0=np.array([0.9]))
    assert traj.fs[1] <= traj.fs[0] + 1e-12
    assert np.all(np.diff(traj.fs) <= 1e-12)


def test_momentum_hand_step():
    p = scalar_box_problem()
    x_next, z_next, v_next = momentum_step(
        np.array([0.0]), np.array([-1.0]), np.array([1.0]), k=2, c=2.0,
        problem=p)
    # gamma=1/2: y=1/2, grad=1/2, z'=-1/4, oracle(-1/4)=+1, x'=1/2
    assert z_next == pytest.approx([-0.25], abs=0)
    assert v_next == pytest.approx([1.0], abs=0)
    assert x_next == pytest.approx([0.5], abs=0)


def test_momentum_run_feasible_and_converges():
    p = scalar_box_problem()
    traj = run(p, cfg_for("euler", variant="momentum", max_iters=60))
    assert np.all(traj.violations <= 1e-12)
    assert traj.fs[-1] < 1e-2


def test_momentum_rejects_multistage_and_delta():
    with pytest.raises(ValueError, match="one-stage"):
        cfg_for("rk44", variant="momentum").validate()
    with pytest.raises(ValueError, match="delta = 1"):
        cfg_for("euler", variant="momentum", delta=0.5).validate()


def test_config_validation():
    with pytest.raises(ValueError, match="c must be"):
        cfg_for("euler", c=0.5).validate()
    with pytest.raises(ValueError, match="delta"):
        cfg_for("euler", delta=0.0).validate()
    with pytest.raises(ValueError, match="variant"):
        cfg_for("euler", variant="fancy").validate()
    with pytest.raises(ValueError, match="max_iters"):
        cfg_for("euler", max_iters=-1).validate()


def test_non_finite_state_raises():
    class InfOracle:
        def lmo(self, g):
            return DenseAtom(np.array([np.inf]))

        def membership_violation(self, x):
            return 0.0

    p = ProblemInstance(DistanceSq(np.array([0.0])), InfOracle(),
                        np.array([0.5]), None, "inf")
    with pytest.raises(ArithmeticError, match="non-finite state at stage 1"):
        rk_fw_step(np.array([0.5]), 0, cfg_for("midpoint"), p)


def test_csv_round_trip():
    p = make_triangle()
    traj = run(p, cfg_for("rk44", max_iters=5))
    buf = io.StringIO()
    traj.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,t,f,gap,step_norm,violation,wall_ns"
    assert len(lines) == 7
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        assert int(cells[0]) == i
        # repr formatting survives the float round trip exactly
        assert float(cells[2]) == traj.fs[i]
        assert float(cells[3]) == traj.gaps[i]


def test_iterates_dump_round_trip(tmp_path):
    p = make_triangle()
    traj = run(p, cfg_for("euler", max_iters=4, record_iterates=True))
    path = tmp_path / "it.txt"
    with open(path, "w") as fh:
        traj.write_iterates(fh)
    back = np.loadtxt(path, ndmin=2)
    assert back == pytest.approx(np.stack(traj.iterates), abs=0)
    bare = run(p, cfg_for("euler", max_iters=2))
    with pytest.raises(ValueError, match="record"):
        bare.write_iterates(io.StringIO())


def test_schedule_shrinks_steps():
    p = make_triangle()
    traj = run(p, cfg_for("euler", max_iters=300, record_iterates=True))
    hops = [np.linalg.norm(traj.iterates[k + 1] - traj.iterates[k])
            for k in range(250, 299)]
    assert max(hops) < 0.05
