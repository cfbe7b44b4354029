import json
import subprocess
import sys

import pytest

from conftest import write_json
from socioplex.cli import run

HEADER = "id,name,institution,phd_institution,field1,field2,field3,collaborators,citations\n"
AGENTS = HEADER + "".join([
    "a,Ann,UF,MIT,05,11,,b,c\n",
    "b,Bob,UF,UCLA,05,,,a,\n",
    "c,Cid,FSU,MIT,11,60,,,a\n",
    "d,Dee,FSU,UCLA,60,,,e,\n",
    "e,Eve,UF,MIT,05,60,,d,b\n",
])


@pytest.fixture
def agents_csv(tmp_path):
    p = tmp_path / "agents.csv"
    p.write_text(AGENTS)
    return p


@pytest.fixture
def example_json(tmp_path, example10):
    return write_json(tmp_path / "ex.json", {"ids": example10.ids, "entries": example10.entries.tolist()})


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_ingest_ok(capsys, agents_csv, tmp_path):
    code, out, _ = cli(capsys, "ingest", "--agents", agents_csv, "--out", tmp_path / "a.json")
    assert code == 0 and "5 agents, no problems" in out
    assert len(json.loads((tmp_path / "a.json").read_text())) == 5


def test_ingest_reports_problems(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(HEADER + "a,Ann,UF,MIT,,,,zz,\n")
    code, out, _ = cli(capsys, "ingest", "--agents", p)
    assert code == 1
    assert "fields empty" in out and "dangling" in out


def test_ingest_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(HEADER + "a,Ann\n")
    code, _, err = cli(capsys, "ingest", "--agents", p)
    assert code == 1 and "line 2" in err


def test_distances_two_unrelated(capsys, tmp_path):
    p = tmp_path / "two.csv"
    p.write_text(HEADER + "a,,X,P,05,,,,\nb,,Y,Q,11,,,,\n")
    code, out, _ = cli(capsys, "distances", "--agents", p)
    assert code == 0
    assert json.loads(out) == {"ids": ["a", "b"], "entries": [[0, 2], [2, 0]]}


def test_distances_bad_weights(capsys, agents_csv):
    code, _, err = cli(capsys, "distances", "--agents", agents_csv, "--weights", "0.5,0.5,0.5,0,0")
    assert code == 2 and "error" in err


def test_distances_fit_grid(capsys, agents_csv):
    code, out, _ = cli(capsys, "distances", "--agents", agents_csv, "--fit-grid", "0.5")
    assert code == 0 and json.loads(out)["ids"] == list("abcde")
    code, _, _ = cli(capsys, "distances", "--agents", agents_csv, "--fit-grid", "0.3")
    assert code == 2


def test_barcodes_text(capsys, example_json):
    code, out, _ = cli(capsys, "barcodes", "--dist", example_json)
    assert code == 0
    assert out == "0 0 1\n" * 9 + "0 0 inf\n1 3 9\n1 4 7\n"


def test_barcodes_json_with_representatives(capsys, example_json):
    code, out, _ = cli(capsys, "barcodes", "--dist", example_json, "--format", "json", "--representatives")
    bars = json.loads(out)["bars"]
    loops = [b for b in bars if b["dim"] == 1]
    assert [(b["birth"], b["death"]) for b in loops] == [(3, 9), (4, 7)]
    assert all(len(b["representative"]) >= 3 for b in loops)


def test_barcodes_svg(capsys, example_json, tmp_path):
    out_path = tmp_path / "b.svg"
    code, _, _ = cli(capsys, "barcodes", "--dist", example_json, "--format", "svg", "--out", out_path)
    assert code == 0 and out_path.read_text().startswith("<svg")


def test_barcodes_pipeline_matches_agents_input(capsys, agents_csv, tmp_path):
    code, out, _ = cli(capsys, "distances", "--agents", agents_csv)
    dist = tmp_path / "d.json"
    dist.write_text(out)
    _, from_dist, _ = cli(capsys, "barcodes", "--dist", dist)
    _, from_agents, _ = cli(capsys, "barcodes", "--agents", agents_csv)
    assert from_dist == from_agents


def test_socioplex_relative_dot(capsys, example_json):
    code, out, err = cli(capsys, "socioplex", "--dist", example_json, "--threshold", "0.1", "--relative",
                         "--dot", "-", "-v")
    assert code == 0
    assert out.count(" -- ") == 9
    assert "relative threshold" in err


def test_socioplex_summary_and_simplices(capsys, example_json, tmp_path):
    sj = tmp_path / "s.json"
    code, out, _ = cli(capsys, "socioplex", "--dist", example_json, "--threshold", "2", "--simplices", sj)
    assert code == 0
    assert out == "threshold 2\ndim 0: 10 simplices\ndim 1: 11 simplices\ndim 2: 2 simplices\n"
    assert len(json.loads(sj.read_text())) == 23


def test_socioplex_bad_relative(capsys, example_json):
    code, _, _ = cli(capsys, "socioplex", "--dist", example_json, "--threshold", "1.5", "--relative")
    assert code == 2


def test_input_exclusive(capsys, example_json, agents_csv):
    assert cli(capsys, "barcodes", "--dist", example_json, "--agents", agents_csv)[0] == 2
    assert cli(capsys, "barcodes")[0] == 2
    assert cli(capsys, "barcodes", "--dist", example_json, "--weights", "1,0,0,0,0")[0] == 2


def test_obstructions_square(capsys, tmp_path):
    sq = write_json(tmp_path / "sq.json", {
        "ids": ["A", "B", "C", "D"],
        "entries": [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]],
    })
    code, out, _ = cli(capsys, "obstructions", "--dist", sq, "--threshold", "1.5", "--format", "json")
    assert code == 0
    (r,) = json.loads(out)
    assert r["missing_links"] == [["A", "C"], ["B", "D"]]
    assert r["threshold_gap"] == 0.5
    code, out, _ = cli(capsys, "obstructions", "--dist", sq, "--threshold", "1.5")
    assert "A-C B-D" in out


def test_obstructions_voids_need_dim(capsys, example_json):
    assert cli(capsys, "obstructions", "--dist", example_json, "--threshold", "5", "--voids")[0] == 2
    assert cli(capsys, "obstructions", "--dist", example_json, "--threshold", "5", "--voids",
               "--max-dim", "3")[0] == 0


def test_cap_exceeded(capsys, example_json):
    code, _, err = cli(capsys, "barcodes", "--dist", example_json, "--cap", "20")
    assert code == 1 and "cap" in err


def test_calibrate(capsys, agents_csv, tmp_path):
    code, out, _ = cli(capsys, "calibrate", "--agents", agents_csv, "--grid", "0.25")
    assert code == 0
    assert out.startswith("weights ") and "d4_labels" in out
    labels = tmp_path / "l.txt"
    labels.write_text("a,b\nd,e\n")
    code, out, _ = cli(capsys, "calibrate", "--agents", agents_csv, "--grid", "0.5", "--labels", labels)
    assert code == 0 and "held_out_pairs (2 pairs)" in out


def test_seed_is_ignored_with_warning(capsys, example_json):
    code, out, err = cli(capsys, "barcodes", "--dist", example_json, "--seed", "3")
    assert code == 0 and "ignored" in err
    assert out == cli(capsys, "barcodes", "--dist", example_json)[1]


def test_missing_file(capsys, tmp_path):
    assert cli(capsys, "barcodes", "--dist", tmp_path / "none.json")[0] == 1


def test_module_entry_point(example_json):
    res = subprocess.run([sys.executable, "-m", "socioplex", "barcodes", "--dist", str(example_json)],
                         capture_output=True, text=True, check=True)
    assert res.stdout.endswith("1 3 9\n1 4 7\n")


def test_socioplex_dot_file(capsys, example_json, tmp_path):
    dot = tmp_path / "out.dot"
    code, out, _ = cli(capsys, "socioplex", "--dist", example_json, "--threshold", "0.1", "--relative",
                       "--max-dim", "2", "--dot", dot)
    assert code == 0 and out.startswith("threshold 1\n")
    assert dot.read_text().count(" -- ") == 9
