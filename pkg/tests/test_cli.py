import csv
import io
import json
import os
import subprocess
import sys

import pytest

import ncmatch.cli as cli
from ncmatch.io import format_dimacs, parse_dimacs

from conftest import PRISM_EDGES, PRISM_WEIGHTS
from ncmatch.graph import Minor

K2 = "p edge 2 1\ne 1 2 5\n"
C4 = "p edge 4 4\ne 1 2 1\ne 2 3 2\ne 3 4 3\ne 4 1 4\n"
TRIANGLE = "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="g.dimacs"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_pm_on_k2(write, capsys):
    assert cli.run(["pm", "--oracle", "brute", write(K2)]) == 0
    out = _json(capsys)
    assert out["matching"] == [[1, 2]] and out["weight"] == 5
    assert out["no_perfect_matching"] is False
    assert set(out["stats"]) >= {"oracle_calls", "cache_hits", "iterations", "depth", "rounds"}


def test_mwpm_and_decide_on_weighted_four_cycle(write, capsys):
    path = write(C4)
    assert cli.run(["mwpm", path]) == 0
    out = _json(capsys)
    assert out["weight"] == 4 and out["matching"] == [[1, 2], [3, 4]]
    assert cli.run(["decide", "-W", "3", path]) == 0
    assert _json(capsys)["decision"] == "no"
    assert cli.run(["decide", "-W", "4", path]) == 0
    assert _json(capsys)["decision"] == "yes"


def test_no_perfect_matching_exit_code(write, capsys):
    path = write(TRIANGLE)
    assert cli.run(["pm", path]) == 2
    assert _json(capsys)["no_perfect_matching"] is True
    assert cli.run(["maxmatching", path]) == 0
    out = _json(capsys)
    assert out["size"] == 1 and out["doubled_weight"] == 1


def test_verify_reports_and_fails(write, capsys, monkeypatch):
    path = write(C4)
    assert cli.run(["mwpm", "--verify", path]) == 0
    assert _json(capsys)["verify"] == {"ok": True, "message": "ok"}
    monkeypatch.setattr(cli, "verify_perfect_matching", lambda g, e: (False, "broken"))
    assert cli.run(["mwpm", "--verify", path]) == 3
    assert _json(capsys)["verify"]["ok"] is False


@pytest.mark.parametrize("text, where", [
    ("p edge 2 1\ne 1 x\n", "line 2, column 5"),
    ("e 1 2\n", "line 1, column 1"),
    ("p edge 2 1\ne 1 3\n", "line 2, column 5"),
    ("p edge 2 2\ne 1 2\n", "line 2"),
])
def test_malformed_input_reports_position(write, capsys, text, where):
    assert cli.run(["pm", write(text)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("nc-match: error:") and where in err


def test_errors_exit_one(write, capsys, tmp_path):
    assert cli.run(["pm", str(tmp_path / "missing")]) == 1
    assert cli.run(["decide", write(C4)]) == 1
    assert cli.run(["mwpm", "--weight-cap", "3", write(C4)]) == 1
    assert cli.run(["pm", "--oracle", "replay", write(C4)]) == 1
    assert "needs --transcript-in" in capsys.readouterr().err


def test_round_trip_of_the_file_format():
    g = Minor.from_edges(6, PRISM_EDGES)
    text = format_dimacs(g, PRISM_WEIGHTS)
    g2, w2 = parse_dimacs(text)
    assert g2 == g and w2 == PRISM_WEIGHTS and format_dimacs(g2, w2) == text


def test_transcript_replay_and_outputs(write, capsys, tmp_path):
    path = write(format_dimacs(Minor.from_edges(6, PRISM_EDGES), PRISM_WEIGHTS))
    tr, duals, trace = (str(tmp_path / n) for n in ("t.json", "d.json", "trace.jsonl"))
    assert cli.run(["mwpm", "--oracle", "tutte", "--oracle-seed", "4", "--transcript-out", tr,
                    "--dump-duals", duals, "--trace", trace, path]) == 0
    live = _json(capsys)
    assert cli.run(["mwpm", "--oracle", "replay", "--transcript-in", tr, path]) == 0
    replay = _json(capsys)
    assert replay["matching"] == live["matching"] and replay["weight"] == live["weight"] == 1
    assert [1, 2, 3] in json.load(open(duals))["sets"]
    events = [json.loads(line) for line in open(trace)]
    assert all("event" in e for e in events)


def test_threads_do_not_change_output(write, capsys):
    path = write(format_dimacs(Minor.from_edges(6, PRISM_EDGES), PRISM_WEIGHTS))
    cli.run(["mwpm", path])
    one = _json(capsys)
    cli.run(["mwpm", "--threads", "4", path])
    assert _json(capsys)["matching"] == one["matching"]


def test_lab_csv(write, capsys, tmp_path):
    out = tmp_path / "lab.csv"
    assert cli.run(["lab", "--out", str(out), write(C4, "a.dimacs"), write(TRIANGLE, "b.dimacs")]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["n"] for r in rows] == ["4", "3"]
    assert rows[0]["triads"] == "4" and rows[0]["cycles"] == "1"
    assert list(rows[0]) == cli.LAB_FIELDS


def test_seed_environment_variable(write, monkeypatch):
    monkeypatch.setenv("NC_MATCH_SEED", "17")
    args = cli.build_parser().parse_args(["pm", write(K2)])
    assert args.oracle_seed == 17 and args.mis_seed == 17


def test_console_script(write):
    path = write(K2)
    proc = subprocess.run([sys.executable, "-m", "ncmatch.cli", "pm", path],
                          capture_output=True, text=True, env=dict(os.environ))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["matching"] == [[1, 2]]
