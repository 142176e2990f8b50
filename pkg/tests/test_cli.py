import csv
import json

import pytest

from yieldgeom import cli
from yieldgeom.errors import UnsupportedGeometryError

SQUARE = {
    "label": "sq",
    "domain": {"type": "square", "side": 3.33},
    "particles": [{"type": "square", "center": [0, 0], "side": 1}],
}


@pytest.fixture
def scene_file(tmp_path):
    p = tmp_path / "sq.json"
    p.write_text(json.dumps(SQUARE))
    return p


def test_solve_prints_values(scene_file, tmp_path, capsys):
    svg = tmp_path / "sq.svg"
    out = tmp_path / "sq.csv"
    assert cli.main(["solve", str(scene_file), "--svg", str(svg), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "Y_c = 0.1765020479" in text
    assert "config = opened-domain-minus-particles/particles" in text
    assert "<svg" in svg.read_text()
    rows = list(csv.DictReader(out.open()))
    assert rows[0]["label"] == "sq" and rows[0]["provenance"] == "geometric"


def test_validate(scene_file, capsys):
    assert cli.main(["validate", str(scene_file)]) == 0
    assert "1 particle(s)" in capsys.readouterr().out


def test_invalid_scene_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"domain": {"type": "disk", "radius": 1}, "particles": [{"type": "disk", "radius": 2}]}))
    assert cli.main(["validate", str(p)]) == 2
    assert "error" in capsys.readouterr().err
    assert cli.main(["solve", str(tmp_path / "missing.json")]) == 2


def test_unsupported_exit_3(scene_file, monkeypatch, capsys):
    def boom(scene):
        raise UnsupportedGeometryError("mixed particle families")

    monkeypatch.setattr(cli, "solve_two_step", boom)
    assert cli.main(["solve", str(scene_file)]) == 3
    assert "yieldgeom oracle" in capsys.readouterr().err


def test_oracle_unconverged_exit_4(scene_file, tmp_path, capsys):
    dump = tmp_path / "u.tvgd"
    code = cli.main(["oracle", str(scene_file), "--n", "64", "--max-iters", "100", "--dump", str(dump)])
    assert code == 4
    assert dump.read_bytes()[:4] == b"TVGD"
    assert "converged = False" in capsys.readouterr().out


def test_oracle_converges(scene_file, tmp_path, capsys):
    out = tmp_path / "o.csv"
    code = cli.main(["oracle", str(scene_file), "--n", "64", "--tol", "1e-5", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert rows[0]["provenance"] == "oracle"
    assert float(rows[0]["y_c"]) == pytest.approx(0.1765, rel=0.15)


def test_oracle_grid_range(scene_file):
    assert cli.main(["oracle", str(scene_file), "--n", "32"]) == 2


def test_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    args = ["sweep", "two-squares", "--param", "d", "--from", "1.2", "--to", "2.0", "--steps", "5", "--jobs", "1"]
    assert cli.main(args + ["--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [float(r["param"]) for r in rows] == pytest.approx([1.2, 1.4, 1.6, 1.8, 2.0])
    assert rows[0]["config"].endswith("/bridged")
    assert rows[-1]["config"].endswith("/particles")


def test_sweep_methods_agree(capsys):
    base = ["sweep", "disk-in-disk", "--param", "R", "--from", "1.5", "--to", "3", "--steps", "3", "--jobs", "1"]
    assert cli.main(base) == 0
    geo = capsys.readouterr().out
    assert cli.main(base + ["--method", "analytic"]) == 0
    ana = capsys.readouterr().out
    for g, a in zip(geo.splitlines(), ana.splitlines()):
        assert [float(x) for x in g.split(",")[:3]] == pytest.approx([float(x) for x in a.split(",")[:3]], rel=1e-9)


def test_sweep_parallel_matches_serial(capsys):
    base = ["sweep", "offset-square", "--param", "d", "--from", "0.1", "--to", "0.5", "--steps", "4"]
    assert cli.main(base + ["--jobs", "1"]) == 0
    serial = capsys.readouterr().out
    assert cli.main(base + ["--jobs", "2"]) == 0
    assert capsys.readouterr().out == serial


@pytest.mark.parametrize(
    "extra",
    [
        ["--set", "L"],
        ["--set", "L=abc"],
        ["--steps", "1"],
    ],
)
def test_sweep_bad_arguments(extra):
    base = ["sweep", "square-in-square", "--param", "L", "--from", "2", "--to", "3", "--jobs", "1"]
    assert cli.main(base + extra) == 2


def test_sweep_out_of_range_parameter():
    args = ["sweep", "square-in-square", "--param", "L", "--from", "0.5", "--to", "3", "--steps", "3", "--jobs", "1"]
    assert cli.main(args) == 2


def test_unknown_kind_and_jobs():
    assert cli.main(["sweep", "hexagons", "--param", "L", "--from", "2", "--to", "3"]) == 2
    assert cli.main(["sweep", "disk-in-disk", "--param", "R", "--from", "2", "--to", "3", "--jobs", "0"]) == 2


def test_default_jobs_env(monkeypatch):
    monkeypatch.setenv("YIELDGEOM_JOBS", "3")
    assert cli.default_jobs() == 3
    monkeypatch.setenv("YIELDGEOM_JOBS", "many")
    with pytest.raises(Exception):
        cli.default_jobs()


def test_examples_deterministic(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "EXAMPLE_SWEEPS", [("dd", "disk-in-disk", "R", 1.5, 3.0, 4, {})])
    monkeypatch.setattr(cli, "EXAMPLE_FIGURES", [("ts", "two-squares", {"d": 1.3})])
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["examples", "--outdir", str(a), "--jobs", "1"]) == 0
    assert cli.main(["examples", "--outdir", str(b), "--jobs", "2"]) == 0
    for rel in ("dd.csv", "ts.svg", "scenes/ts.json"):
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "yieldgeom", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "oracle" in r.stdout
