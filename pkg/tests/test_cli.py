import numpy as np
import pytest

from robustmo.cli import EXIT_DISCRETIZATION, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from robustmo.io import write_csv, write_instance
from robustmo.problem import demo_instance

from test_solver import concave_gap_instance


@pytest.fixture
def demo(tmp_path):
    path = tmp_path / "demo.json"
    write_instance(demo_instance(), path)
    return path


def test_verify_demo(demo, capsys):
    assert main(["verify", "--instance", str(demo)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "chain equals oracle at p=2: yes" in out
    assert "coverage (p=2): pass" in out


def test_relations_disks(tmp_path, capsys):
    t = np.arange(720) * 2 * np.pi / 720
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, ["y_1", "y_2"], np.c_[-1 + np.cos(t), np.sin(t)].tolist())
    write_csv(b, ["y_1", "y_2"], np.c_[2 + 2 * np.cos(t), 2 * np.sin(t)].tolist())
    assert main(["relations", str(a), str(b)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "strict_upper: true" in out
    eps = float(out.split("epsilon: ")[1].split()[0])
    assert eps > 0


@pytest.mark.parametrize("extra", [["--p", "0"], ["--epsilon", "-1"], ["--delta", "0"],
                                   ["--alpha", "1.5"], ["--bogus"]])
def test_usage_errors(demo, extra, capsys):
    assert main(["solve", "--instance", str(demo), *extra]) == EXIT_USAGE


def test_missing_instance(tmp_path, capsys):
    assert main(["solve"]) == EXIT_USAGE
    assert main(["oracle", "--instance", str(tmp_path / "nope.json")]) == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x"}')
    assert main(["oracle", "--instance", str(bad)]) == EXIT_USAGE
    assert "n: missing" in capsys.readouterr().err


def test_solve_output_is_deterministic(demo, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        assert main(["solve", "--instance", str(demo), "--p", "2", "--out", str(d)]) == EXIT_OK
        outs.append((d / "solutions.csv").read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"decision,slot,x_1,y_1,y_2\n1,1,1,3,0.333333333333\n")


def test_other_commands(demo, tmp_path, capsys):
    out = tmp_path / "o"
    for cmd in ("oracle", "bounds", "compare", "export-geometry"):
        assert main([cmd, "--instance", str(demo), "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "robust weakly efficient: {x1, x2}" in text
    assert "alpha: 3" in text
    assert "classified differently: {x1}" in text
    assert (out / "staircase_x2.csv").read_text() == "y_1,y_2\n2,0\n0,2\n"
    assert (out / "images_x3.csv").read_text() == "y_1,y_2\n4,4\n0,0\n"
    assert (out / "bounds.csv").read_text().splitlines()[1] == "1,-1,-1,4,4,3"
    assert (out / "oracle.csv").read_text() == "decision,x_1\n1,1\n2,2\n"


def test_export_geometry_requires_out(demo):
    assert main(["export-geometry", "--instance", str(demo)]) == EXIT_USAGE


def test_generate_round_trip(tmp_path):
    assert main(["generate", "--kind", "objective_wise_random", "--k", "2", "--seed", "1",
                 "--out", str(tmp_path)]) == EXIT_OK
    path = tmp_path / "objective_wise_random-1.json"
    assert main(["verify", "--instance", str(path)]) == EXIT_OK


def test_discretization_exit_code(tmp_path):
    path = tmp_path / "gap.json"
    write_instance(concave_gap_instance(), path)
    args = ["solve", "--instance", str(path), "--p", "2", "--refine", "2"]
    assert main(args) == EXIT_OK
    assert main(args + ["--strict"]) == EXIT_DISCRETIZATION


def test_verification_failure_exit_code(demo, monkeypatch):
    import robustmo.cli as cli
    from robustmo.solver import CoverageReport
    monkeypatch.setattr(cli, "verify_coverage",
                        lambda *a, **k: CoverageReport(False, {0: []}, [], first_uncovered=0))
    assert main(["verify", "--instance", str(demo)]) == EXIT_VERIFY
