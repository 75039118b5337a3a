import json

import pytest

from simplepoly import cli
from simplepoly.catalog import NAMES, catalog
from simplepoly.codec.spoly import emit_spoly, parse_spoly
from simplepoly.codec.tri3 import parse_tri3
from simplepoly.thickening.triangulation3 import Triangulation3


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_catalog(capsys):
    code, out, _ = run(capsys, "validate", "catalog:bing_house", "--json")
    assert code == 0
    assert json.loads(out)["summary"]["double_points"] == 2


def test_validate_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, "validate", str(tmp_path / "nonexistent.spoly"))
    assert code == 1 and out == "" and err


def test_validate_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.spoly"
    path.write_text("polyhedron p\nedge e interval y.0 y.1\n")
    code, out, err = run(capsys, "validate", str(path))
    assert code == 1
    assert "DANGLING_REFERENCE" in err


def test_validate_file(capsys, tmp_path):
    path = tmp_path / "x.spoly"
    path.write_text(emit_spoly(catalog("suzuoka")))
    assert run(capsys, "validate", str(path))[0] == 0


def test_unknown_catalog_entry(capsys):
    assert run(capsys, "validate", "catalog:nope")[0] == 1


def test_analyze_bing_house(capsys):
    code, out, _ = run(capsys, "analyze", "catalog:bing_house", "--dim", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["compatible"] is True
    assert any(d["verdict"] == "affirmed" and "standard sphere or S^4" in d["claim"] for d in data["decisions"])


def test_analyze_needs_dim(capsys):
    assert run(capsys, "analyze", "catalog:disc")[0] == 1


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "catalog:round_bundle", "--dim", "4")
    assert code == 0 and "rank H_2(M) = 2" in out


def test_analyze_budget_exhausted(capsys):
    code, out, err = run(capsys, "analyze", "catalog:round_bundle", "--dim", "4", "--budget", "1", "--json")
    assert code == 3 and "budget" in err
    data = json.loads(out)
    assert data["pi1"]["status"] == "unknown"
    assert all(d["verdict"] != "affirmed" for d in data["decisions"] if "sphere" in d["claim"])


def test_thicken_incompatible_writes_nothing(capsys, tmp_path):
    out = tmp_path / "out.tri3"
    code, stdout, err = run(capsys, "thicken", "catalog:incompatible_circle", "-o", str(out))
    assert code == 2
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []
    assert stdout == "" and "witness" in err


def test_thicken_writes_file(capsys, tmp_path):
    out = tmp_path / "disc.tri3"
    code, stdout, _ = run(capsys, "thicken", "catalog:disc", "-o", str(out), "--json")
    assert code == 0
    assert json.loads(stdout)["is_manifold"] is True
    assert not isinstance(parse_tri3(out.read_text()), list)


def test_thicken_to_stdout(capsys):
    code, out, err = run(capsys, "thicken", "catalog:disc")
    assert code == 0 and out.startswith("tri3 ")
    assert json.loads(err)["is_manifold"] is True


def test_thicken_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.tri3", tmp_path / "b.tri3"
    run(capsys, "thicken", "catalog:two_crossings", "-o", str(a))
    run(capsys, "thicken", "catalog:two_crossings", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_verification_failure_exit_code(capsys, tmp_path, monkeypatch):
    from simplepoly.thickening import build

    broken = Triangulation3(1, {(0, 3): (0, 3, (0, 1, 2))}, ("region:D",))
    monkeypatch.setattr(build, "thicken", lambda p: broken)
    out = tmp_path / "x.tri3"
    code, _, err = run(capsys, "thicken", "catalog:disc", "-o", str(out))
    assert code == 4
    assert not out.exists()


def test_collapse(capsys):
    code, out, _ = run(capsys, "collapse", "catalog:disc", "--json", "--seed", "5")
    assert code == 0 and json.loads(out)["outcome"] == "collapsed"


def test_collapse_budget_exit(capsys):
    code, out, _ = run(capsys, "collapse", "catalog:disc", "--budget", "1", "--restarts", "1",
                       "--exhaustive-max", "0")
    assert code == 3


def test_collapse_same_seed_same_output(capsys):
    args = ("collapse", "catalog:disc", "--json", "--seed", "7", "--exhaustive-max", "0")
    assert run(capsys, *args) == run(capsys, *args)


def test_examples(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0 and out.split() == list(NAMES)
    code, out, _ = run(capsys, "examples", "bing_house")
    assert parse_spoly(out) == catalog("bing_house")


def test_examples_json(capsys):
    code, out, _ = run(capsys, "examples", "--json")
    assert json.loads(out)["examples"] == list(NAMES)


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["analyze", "catalog:disc", "--dim", "x"]])
def test_usage_errors(capsys, argv):
    assert cli.run(argv) == 1
