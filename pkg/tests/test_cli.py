import json
import subprocess
import sys
from types import SimpleNamespace

import jsonschema
import pytest

from spherical_thrackle import cli
from spherical_thrackle.construct import six_cycle_drawing
from spherical_thrackle.drawing import Drawing
from spherical_thrackle.graph import AbstractGraph
from spherical_thrackle.io import save_drawing
from spherical_thrackle.kernel import from_lonlat

SCHEMA = cli.report_schema()


def run_json(capsys, *argv):
    code = cli.main(["--json", *argv])
    rep = json.loads(capsys.readouterr().out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["exit_code"] == code
    return code, rep


@pytest.fixture
def c8(tmp_path):
    path = tmp_path / "c8.json"
    assert cli.main(["construct", "cycle", "8", "-o", str(path)]) == 0
    return path


def test_construct_then_verify(c8, capsys):
    capsys.readouterr()
    code, rep = run_json(capsys, "verify", str(c8))
    assert code == 0 and rep["status"] == "ok"


def test_classify_and_lemmas(c8, capsys):
    capsys.readouterr()
    assert run_json(capsys, "classify", str(c8))[0] == 0
    code, rep = run_json(capsys, "lemmas", str(c8))
    assert code == 0
    code, rep = run_json(capsys, "lemmas", str(c8), "--id", "L-EVEN-LONG")
    assert code == 0


def test_verify_violation(tmp_path, capsys):
    g = AbstractGraph(4, ((0, 1), (2, 3)))
    d = Drawing.from_flags(g, [from_lonlat(0, 0), from_lonlat(0.3, 0),
                               from_lonlat(1.0, 0.2), from_lonlat(1.3, 0.4)])
    path = tmp_path / "bad.json"
    save_drawing(d, path)
    code, rep = run_json(capsys, "verify", str(path))
    assert code == 1 and rep["status"] == "violation"


def test_construct_four_cycle_is_input_error(capsys):
    code, rep = run_json(capsys, "construct", "cycle", "4")
    assert code == 2 and rep["error"]["type"] == "PreconditionViolation"


def test_bad_file_is_input_error(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{\"format_version\": 1}")
    assert run_json(capsys, "verify", str(path))[0] == 2
    assert run_json(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as info:
        cli.main(["verify"])
    assert info.value.code == 2


def test_falsify_small_budget(capsys):
    # C} is the 4-vertex graph K4 minus an edge (n=4, m=5)
    code, rep = run_json(capsys, "falsify", "C}", "--budget", "5", "--steps", "200")
    assert code == 0 and rep["result"]["critical"] is False


def test_falsify_precondition(capsys):
    code, _ = run_json(capsys, "falsify", "Dhc")   # the 5-cycle, m = n
    assert code == 2


def test_search_and_render(tmp_path, capsys):
    out = tmp_path / "c5.json"
    code, rep = run_json(capsys, "search", "Dhc", "--budget", "40", "-o", str(out))
    assert code == 0 and out.exists()
    svg = tmp_path / "c5.svg"
    code, _ = run_json(capsys, "render", str(out), "-o", str(svg), "--projection", "Gnomonic")
    assert code == 0 and svg.read_text().rstrip().endswith("</svg>")


def test_search_exhausted(capsys):
    code, rep = run_json(capsys, "search", "Cr", "--budget", "3", "--steps", "200")   # the 4-cycle
    assert code == 1 and rep["result"]["status"] == "Exhausted"


def test_fuzz_failure_is_critical(monkeypatch, capsys):
    fake = SimpleNamespace(count=1, uncertified=0, chi_pairs_checked=0, chi_antisymmetry_violations=0,
                           parity_configs_checked=0, parity_violations=0, critical=True,
                           as_dict=lambda: {"verdicts": {"L-HEMI": {"Fail": 1}}})
    monkeypatch.setattr(cli, "run_fuzz", lambda *a, **k: fake)
    code, rep = run_json(capsys, "fuzz", "--count", "1")
    assert code == 3 and rep["status"] == "critical"


def test_fuzz_small_campaign(capsys):
    code, rep = run_json(capsys, "fuzz", "--count", "12")
    assert code == 0 and rep["result"]["fail_count"] == 0


def test_module_entry_point(tmp_path):
    path = tmp_path / "c6.json"
    save_drawing(six_cycle_drawing(), path)
    out = subprocess.run([sys.executable, "-m", "spherical_thrackle", "verify", str(path)],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
