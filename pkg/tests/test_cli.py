import numpy as np
import pytest

from rkfw.cli import main


def test_certify_stdout_and_exit_codes(capsys):
    assert main(["certify", "--tableau", "rk44", "--k-max", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "k,z_1,z_2,z_3,z_4"
    assert out[-2].endswith("yes")
    # midpoint's negative coefficient flips the verdict and the exit code
    assert main(["certify", "--tableau", "midpoint"]) == 1
    out = capsys.readouterr().out
    assert "NO" in out


def test_certify_to_file(tmp_path):
    out = tmp_path / "cert.csv"
    assert main(["certify", "--tableau", "euler", "--k-max", "4",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,z_1"
    assert float(lines[1].split(",")[1]) == pytest.approx(2.0 / 3.0)


def test_certify_unknown_tableau(capsys):
    assert main(["certify", "--tableau", "rk99"]) == 1
    assert "unknown tableau" in capsys.readouterr().err


def test_solve_writes_run_dir(tmp_path):
    code = main(["solve", "--problem", "triangle", "--tableau", "rk44",
                 "--iters", "20", "--out-dir", str(tmp_path),
                 "--record-iterates"])
    assert code == 0
    assert (tmp_path / "rk44_plain" / "traj.csv").exists()
    assert (tmp_path / "rk44_plain" / "iterates.txt").exists()


def test_solve_momentum_conflict(tmp_path, capsys):
    code = main(["solve", "--problem", "triangle", "--tableau", "rk44",
                 "--variant", "momentum", "--out-dir", str(tmp_path)])
    assert code == 1
    assert "one-stage" in capsys.readouterr().err


def test_zigzag_from_dump(tmp_path, capsys):
    it = tmp_path / "it.txt"
    rows = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]
    it.write_text("\n".join(f"{a} {b}" for a, b in rows) + "\n")
    assert main(["zigzag", "--iterates", str(it), "--window", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "block_start_k,energy"
    assert float(out[1].split(",")[1]) == pytest.approx(0.9486832980505138)


def test_zigzag_window_too_large(tmp_path, capsys):
    it = tmp_path / "it.txt"
    it.write_text("0 0\n1 1\n")
    assert main(["zigzag", "--iterates", str(it), "--window", "5"]) == 1
    assert "need at least" in capsys.readouterr().err


def test_tae_stdout(capsys):
    code = main(["tae", "--problem", "scalar_huber", "--tableau", "euler",
                 "--delta", "0.05", "--iters", "10", "--ref-delta", "0.005"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,epsilon"
    assert len(lines) == 12
    t0, e0 = lines[1].split(",")
    assert float(t0) == 0.0 and float(e0) == 0.0


def test_tae_requires_ref_delta(capsys):
    assert main(["tae", "--problem", "triangle"]) == 1
    assert "ref-delta" in capsys.readouterr().err


def test_sweep_runs_config(tmp_path):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text(
        "problem = sensing\nm = 20\nn = 5\nalpha = 4.0\niters = 15\n"
        f"tableau = euler, rk44\nout_dir = {tmp_path / 'out'}\n")
    assert main(["sweep", "--config", str(cfgfile), "--jobs", "2"]) == 0
    assert (tmp_path / "out" / "summary.csv").exists()


def test_sweep_bad_config(tmp_path, capsys):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text("tableu = rk44\n")
    assert main(["sweep", "--config", str(cfgfile)]) == 1
    assert "unknown key: tableu" in capsys.readouterr().err


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])
