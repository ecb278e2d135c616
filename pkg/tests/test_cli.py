import json
import subprocess
import sys

import pytest

from swcol.cli import main
from swcol.graph import dumps_dimacs, loads_dimacs
from swcol.lattice import LatticeSpec, generate
from swcol.rewire import rewire
from swcol.rng import derive_trial_rng, make_rng
from swcol.solver import solve

from conftest import complete_graph

ALL_SPECS = ["square:3", "square:4", "square:5", "square:7", "triangular:6", "triangular:9",
             "cubic6:3", "cubic6:4", "cubic6:5", "cubic5:4", "cubic5:6"]


def run(*argv):
    return main([str(a) for a in argv])


def test_solve_exit_codes(tmp_path, capsys):
    k4 = tmp_path / "k4.col"
    k4.write_text(dumps_dimacs(complete_graph(4)))
    assert run("solve", "--in", k4, "--k", 3) == 2
    assert "uncolourable" in capsys.readouterr().out
    assert run("solve", "--in", k4, "--k", 4, "--witness") == 0
    out = capsys.readouterr().out
    assert "nodes_visited: 4" in out and "witness: " in out
    assert run("solve", "--in", k4, "--k", 3, "--max-nodes", 1) == 3


def test_usage_and_data_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        run("solve", "--k", 3)
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        run("frobnicate")
    assert info.value.code == 64
    assert run("lattice", "--family", "cubic5", "--size", 5) == 64
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 3 1\ne 1 9\n")
    assert run("solve", "--in", bad, "--k", 3) == 65
    assert run("solve", "--in", tmp_path / "missing.col", "--k", 3) == 65
    assert "error" in capsys.readouterr().err


def test_lattice_check_and_out(tmp_path, capsys):
    assert run("lattice", "--family", "cubic5", "--size", 4, "--check") == 0
    out = capsys.readouterr().out
    assert "N=64 M=160" in out and "5:64" in out
    f = tmp_path / "sq.col"
    assert run("lattice", "--family", "square", "--size", 4, "--out", f) == 0
    assert loads_dimacs(f.read_text()) == generate(LatticeSpec("square", 4))


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_lattice_export_solve_round_trip(tmp_path, capsys, spec):
    fam, L = spec.split(":")
    f = tmp_path / "g.col"
    assert run("lattice", "--family", fam, "--size", L, "--out", f) == 0
    code = run("solve", "--in", f, "--k", 3)
    direct = solve(generate(LatticeSpec.parse(spec)), 3)
    out = capsys.readouterr().out
    assert code == direct.status.exit_code
    assert f"nodes_visited: {direct.nodes_visited}" in out


def test_export_matches_sweep_trial(tmp_path, capsys):
    f = tmp_path / "t.col"
    assert run("export", "--family", "cubic5", "--size", 4, "--p", 0.3, "--seed", 8, "--trial", 5,
               "--out", f) == 0
    expected = rewire(generate(LatticeSpec("cubic5", 4)), 0.3, derive_trial_rng(8, 5)).graph
    assert loads_dimacs(f.read_text()) == expected


def test_rewire_command(tmp_path, capsys):
    src, dst = tmp_path / "in.col", tmp_path / "out.col"
    g = generate(LatticeSpec("square", 5))
    src.write_text(dumps_dimacs(g))
    assert run("rewire", "--in", src, "--p", 0.4, "--seed", 3, "--out", dst, "--rng", "mitchell-moore") == 0
    assert loads_dimacs(dst.read_text()) == rewire(g, 0.4, make_rng(3, "mitchell-moore")).graph
    assert run("rewire", "--in", src, "--p", 0, "--seed", 3, "--out", dst) == 0
    assert loads_dimacs(dst.read_text()) == g
    with pytest.raises(SystemExit):
        run("rewire", "--in", src, "--p", 1.5, "--seed", 3)


CONFIG = """\
lattices = square:4, square:5, cubic5:4
p_log = 0.01, 1, 5
trials = 60
seed = 17
"""


def test_sweep_collapse_plot_pipeline(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(CONFIG)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("sweep", "--config", cfg, "--out", a) == 0
    monkeypatch.setenv("SWCOL_WORKERS", "2")
    assert run("sweep", "--config", cfg, "--out", b, "--raw-dir", tmp_path / "raw") == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(list((tmp_path / "raw").glob("*.csv"))) == 15
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert manifest["master_seed"] == 17 and manifest["rng"] == "default"
    assert len(manifest["cells"]) == 15 and all(c["trials"] == 60 for c in manifest["cells"])
    assert not list(tmp_path.glob(".*.tmp"))

    scan = tmp_path / "scan.csv"
    resc = tmp_path / "rescaled.csv"
    assert run("collapse", "--in", a, "--family", "square", "--a-min", -2, "--a-max", 2, "--step", 0.5,
               "--out", scan, "--emit-rescaled", resc) == 0
    lines = scan.read_text().splitlines()
    assert lines[0] == "a,metric" and len(lines) == 1 + 9 + 1 and lines[-1].startswith("# best a=")
    assert resc.read_text().startswith("label,N,p,x,fraction,half_width")

    assert run("plot", "--in", a, "--kind", "fraction", "--out-prefix", tmp_path / "fig_") == 0
    assert {p.name for p in tmp_path.glob("fig_*.svg")} == {"fig_fraction_square.svg", "fig_fraction_cubic5.svg"}


def test_sweep_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("lattices = square:4\ntrials = -3\n")
    assert run("sweep", "--config", cfg, "--out", tmp_path / "x.csv") == 65
    assert not (tmp_path / "x.csv").exists()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "swcol.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "swcol 0.1.0" in out.stdout
