import json
import math

import pytest

from torus_uncertainty import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def test_up_powered_cos(capsys):
    code, out, err = run(capsys, "up", "--kernel", "powered-cos", "--n", "5", "--L", "1,1")
    assert code == 0
    assert out.startswith("# torus_uncertainty ")
    assert '"kernel": "powered-cos"' in out.splitlines()[1]
    (r,) = rows(out)
    assert float(r["up_directional"]) == pytest.approx(0.25 + 1 / 38, rel=1e-14)
    assert err.startswith("up: ")


def test_kernel_sweep_monotone(capsys):
    code, out, _ = run(capsys, "kernel-sweep", "--kernel", "fejer", "--d", "2", "--n", "16,32,64", "--L", "1,1")
    assert code == 0
    vals = [float(r["up_directional"]) for r in rows(out)]
    assert vals[0] < vals[1] < vals[2] < 0.4


def test_min_var_box(capsys):
    code, out, _ = run(capsys, "min-var", "--support", "box", "--N", "3,3", "--L", "1,0")
    assert code == 0
    (r,) = rows(out)
    assert float(r["var_angular"]) == pytest.approx(math.tan(math.pi / 8) ** 2, rel=1e-15)


def test_frame_commands(capsys):
    code, out, err = run(capsys, "frame-uep", "--A", "quincunx", "--L", "1,0", "--j", "1,2,3,4")
    assert code == 0 and "max UEP residual" in err
    assert all(float(r["residual_ii"]) < 1e-12 for r in rows(out))
    code, out, _ = run(capsys, "frame-cascade", "--A", "2", "--L", "1", "--J", "5", "--seed", "4")
    assert code == 0
    assert len(rows(out)) == 6
    code, out, _ = run(capsys, "reference-limits", "--L", "1", "--j", "20,40")
    assert code == 0 and len(rows(out)) == 2
    code, out, _ = run(capsys, "frame-limits", "--A", "2", "--L", "1", "--j", "10,20", "--format", "json")
    doc = json.loads(out)
    assert doc["spec"]["name"] == "frame-limits"
    assert len(doc["rows"]) == 2


def test_compare_gg(capsys):
    code, out, _ = run(capsys, "compare-gg", "--kernel", "perturbed-t", "--n", "10", "--L", "2,3")
    assert code == 0
    assert float(rows(out)[0]["up_gg_per_n"]) > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["up", "--kernel", "nope"],
        ["up", "--kernel", "powered-cos", "--n", "x", "--L", "1"],
        ["up", "--kernel", "powered-cos", "--L", "1"],
        ["compare-gg", "--kernel", "perturbed-p", "--n", "5", "--L", "2,0"],
        ["frame-uep", "--A", "3", "--L", "1", "--j", "2"],
        ["frame-uep", "--A", "2", "--L", "1", "--j", "0"],
        ["min-var", "--support", "line", "--L", "1,0"],
    ],
)
def test_validation_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "invalid" in err


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "frame-limits", "--A", "quincunx", "--L", "1,0", "--j", "400", "--budget", "1000")
    assert code == 3 and "budget" in err
    code, _, _ = run(capsys, "up", "--kernel", "fejer", "--n", "300", "--d", "3")
    assert code == 3


def test_config_file_and_output(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    out = tmp_path / "table.csv"
    cfg.write_text(json.dumps({"name": "min-var", "params": {"support": "random", "d": 2, "size": 20, "trials": 3},
                               "seed": 11, "output": str(out)}))
    code, stdout, _ = run(capsys, "min-var", "--config", str(cfg))
    assert code == 0 and stdout == ""
    assert len(rows(out.read_text())) == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "up", "params": {}}))
    assert run(capsys, "min-var", "--config", str(bad))[0] == 2


def test_unknown_config_parameter(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"params": {"kernel": "fejer", "n": 4, "colour": "red"}}))
    assert run(capsys, "up", "--config", str(cfg))[0] == 2


def test_deterministic_bytes():
    for threads in (1, 2):
        a, _ = cli.run_experiment("min-var", {"support": "random", "d": 3, "trials": 4, "restarts": 50}, seed=5,
                                  threads=threads)
        b, _ = cli.run_experiment("min-var", {"support": "random", "d": 3, "trials": 4, "restarts": 50}, seed=5,
                                  threads=threads)
        assert a == b
    a, _ = cli.run_experiment("kernel-sweep", {"kernel": "powered-cos", "n": "1,2,3,4", "L": "1,2"}, threads=1)
    b, _ = cli.run_experiment("kernel-sweep", {"kernel": "powered-cos", "n": "1,2,3,4", "L": "1,2"}, threads=2)
    assert a.split("\n", 2)[2] == b.split("\n", 2)[2]


def test_threads_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2


def test_diff_tables(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    text, _ = cli.run_experiment("kernel-sweep", {"kernel": "dirichlet", "n": "1,2,3", "d": 2, "L": "1,1"})
    a.write_text(text)
    b.write_text(text)
    assert run(capsys, "diff-tables", str(a), str(b))[0] == 0
    lines = text.splitlines()
    cells = lines[3].split(",")
    cells[6] = repr(float(cells[6]) * 1.01)
    lines[3] = ",".join(cells)
    b.write_text("\n".join(lines) + "\n")
    assert run(capsys, "diff-tables", str(a), str(b), "--rtol", "1e-3")[0] == 1
    c = tmp_path / "c.csv"
    c.write_text("x,y\n1,2\n")
    assert run(capsys, "diff-tables", str(a), str(c))[0] == 2


def test_closed_form_vs_bruteforce_tables(tmp_path, capsys):
    # the closed_form column and the computed column of one Dirichlet table, as two tables
    text, table = cli.run_experiment("kernel-sweep", {"kernel": "dirichlet", "n": "1,2,4,8", "d": 2, "L": "1,2"})
    a = tmp_path / "computed.csv"
    b = tmp_path / "closed.csv"
    a.write_text("v\n" + "\n".join(cli._fmt(r["up_directional"]) for r in table.rows) + "\n")
    b.write_text("v\n" + "\n".join(cli._fmt(r["closed_form"]) for r in table.rows) + "\n")
    assert run(capsys, "diff-tables", str(a), str(b), "--rtol", "1e-10")[0] == 0
