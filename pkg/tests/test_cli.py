import json

import numpy as np
import pytest

from digraph_consensus.cli import main
from digraph_consensus.generate import converging_path

from conftest import FIXTURES, two_cycle


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, g, name="g.txt"):
    path = tmp_path / name
    path.write_text(g.to_edge_list())
    return path


def assert_subset(golden, actual, where="report"):
    for key, value in golden.items():
        assert key in actual, f"{where}.{key} missing"
        if isinstance(value, dict):
            assert_subset(value, actual[key], f"{where}.{key}")
        else:
            assert actual[key] == value, f"{where}.{key}: {actual[key]!r} != {value!r}"


@pytest.mark.parametrize("name", ["converging_path", "asymmetric_2cycle"])
def test_analyze_matches_golden(capsys, name):
    code, out, _ = run(capsys, "analyze", "--json", FIXTURES / f"{name}.txt")
    assert code == 0
    report = json.loads(out)
    golden = json.loads((FIXTURES / f"{name}.golden.json").read_text())
    assert_subset(golden, report)
    forest = np.array(golden["projector"]["forest"], dtype=float)
    for route in ("resolvent", "long_run"):
        assert np.abs(np.array(report["projector"][route], dtype=float) - forest).max() <= 1e-6


def test_analyze_text_flags_strong_component_prediction(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", write(tmp_path, converging_path(5)))
    assert code == 0
    assert "strong c=5" in out
    assert "structural=1" in out
    assert "rank(L): numerical=4" in out
    assert "n-c prediction: 0 (INCORRECT" in out
    assert "result: all checks pass" in out


def test_analyze_empty_graph(capsys, tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("4 0\n")
    code, out, _ = run(capsys, "analyze", "--json", path)
    report = json.loads(out)
    assert code == 0
    assert report["forest_dimension"] == {"structural": 4, "enumerative": 4}
    assert report["rank"]["numerical"] == 0
    for route in ("forest", "resolvent", "long_run"):
        assert np.array_equal(np.array(report["projector"][route], dtype=float), np.eye(4))


def test_json_round_trips_bit_exactly(capsys, tmp_path):
    g = two_cycle(0.1, 0.7)
    code, out, _ = run(capsys, "analyze", "--json", write(tmp_path, g))
    report = json.loads(out)
    from digraph_consensus.checks import analyze_graph

    a = analyze_graph(g)
    assert np.array_equal(np.array(report["projector"]["resolvent"], dtype=float), a.resolvent_projector)
    assert np.array_equal(np.array(report["projector"]["forest"], dtype=float), a.forest_projector)
    eig = [complex(float(re), float(im)) for re, im in report["eigenvalues"]]
    assert eig == list(a.report.eigenvalues)
    assert json.loads(json.dumps(report)) == report


def test_cross_check_failure_exits_2(capsys, tmp_path):
    # tiny tau leaves the resolvent far from the projector
    code, out, _ = run(capsys, "analyze", "--tau", "10", write(tmp_path, two_cycle()))
    assert code == 2
    assert "[FAIL] resolvent_matches_forests" in out


@pytest.mark.parametrize(
    "text, fragment",
    [("2 1\n0 0 1.0\n", "line 2: self-loop"), ("nonsense\n", "line 1")],
)
def test_input_errors_exit_1(capsys, tmp_path, text, fragment):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, _, err = run(capsys, "analyze", path)
    assert code == 1 and fragment in err


def test_missing_file_and_bad_usage(capsys, tmp_path):
    assert run(capsys, "analyze", tmp_path / "nope.txt")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_simulate_discrete_leader_follower(capsys, tmp_path):
    out_csv = tmp_path / "traj.csv"
    code, _, err = run(
        capsys, "simulate", FIXTURES / "converging_path.txt", "--mode", "discrete",
        "--x0", "5,0,0", "--steps", 200, "--out", out_csv,
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "t,x0,x1,x2" and len(lines) == 202
    deviation = float(err.strip().splitlines()[-1].rsplit("=", 1)[1])
    assert deviation < 1e-6


def test_simulate_empty_graph_never_moves(capsys, tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("3 0\n")
    code, out, err = run(capsys, "simulate", path, "--seed", 3, "--steps", 10)
    assert code == 0
    rows = np.array([[float(v) for v in line.split(",")] for line in out.splitlines()[1:]])
    assert np.all(rows[:, 1:] == rows[0, 1:])
    assert err.strip().endswith("= 0")


def test_simulate_continuous_two_cycle(capsys, tmp_path):
    code, out, err = run(
        capsys, "simulate", write(tmp_path, two_cycle()), "--mode", "continuous",
        "--x0", "0,1", "--t-end", 20,
    )
    assert code == 0
    final = [float(v) for v in out.splitlines()[-1].split(",")]
    assert final[0] == 20.0
    assert float(err.strip().rsplit("=", 1)[1]) < 1e-6


@pytest.mark.parametrize(
    "extra, fragment",
    [(["--x0", "1,2,3"], "3 entries"), (["--mode", "continuous", "--dt", "5"], "stable")],
)
def test_simulate_input_errors(capsys, tmp_path, extra, fragment):
    code, _, err = run(capsys, "simulate", write(tmp_path, two_cycle()), *extra)
    assert code == 1 and fragment in err


def test_fuzz_single_vertex(capsys):
    code, out, _ = run(capsys, "fuzz", "--count", 1, "--n-max", 1)
    assert code == 0 and "instances: 1" in out and "all checks pass" in out


def test_fuzz_exhaustive_up_to_4(capsys):
    code, out, _ = run(capsys, "fuzz", "--count", 100, "--n-max", 4, "--exhaustive", "--seed", 1)
    # 1 + 2 + 64 + 4096 labelled digraphs, then 100 random ones
    assert "instances: 4265" in out
    assert code == 0, out


def test_fuzz_is_deterministic(capsys):
    first = run(capsys, "fuzz", "--count", 50, "--n-max", 6, "--seed", 9)
    second = run(capsys, "fuzz", "--count", 50, "--n-max", 6, "--seed", 9)
    assert first == second


def test_fuzz_reports_failing_graph_in_edge_list_format(capsys):
    code, out, _ = run(capsys, "fuzz", "--count", 5, "--n-max", 3, "--tau", 10, "--seed", 2)
    assert code == 2
    assert "# failed: resolvent_matches_forests" in out


def test_fuzz_usage_errors(capsys):
    assert run(capsys, "fuzz", "--count", 0)[0] == 1
    assert run(capsys, "fuzz", "--n-max", 6, "--exhaustive")[0] == 1
