import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from hamburger.cli import load_config, main, parse_complex

FIXTURE_ATOMS = [[math.log(2), 1, 0], [math.log(3), -2, 0], [math.log(5), 0.5, 0]]


def schema(name):
    text = resources.files("hamburger").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    doc = json.loads(out.strip().splitlines()[-1]) if out.strip() else None
    if doc is not None:
        jsonschema.validate(doc, schema(doc["header"]["command"]))
    return code, doc, err


def test_eval(capsys, tmp_path):
    code, doc, _ = run(capsys, "eval", "4.1", "--s", "1", "--out", str(tmp_path))
    assert code == 0 and abs(doc["result"]["value"][0] - math.pi / 4) < 1e-10
    _, doc, _ = run(capsys, "eval", "1.0", "--s", "2")
    assert abs(doc["result"]["value"][0] - math.pi ** 2 / 6) < 1e-12
    _, doc, _ = run(capsys, "eval", "3.1", "--s", "0.5+3i")
    assert doc["result"]["functional_equation_residual"] <= 1e-8


def test_eval_bad_selector(capsys):
    code, doc, err = run(capsys, "eval", "9.99", "--s", "1")
    assert code == 2 and doc is None and "out of range" in err
    code, _, _ = run(capsys, "eval", "3.1", "--s", "one")
    assert code == 2


def test_zeros(capsys, tmp_path):
    code, doc, _ = run(capsys, "zeros", "zeta", "--T", "30", "--out", str(tmp_path))
    assert code == 0 and doc["result"]["count"] == 3
    rows = (tmp_path / "zeta_zeros.csv").read_text().splitlines()
    assert rows[0] == "ordinate,multiplicity,residual" and len(rows) == 4
    code, doc, _ = run(capsys, "zeros", "3.1", "--T", "10", "--out", str(tmp_path))
    rows = (tmp_path / "3_1_zeros.csv").read_text().splitlines()[1:]
    assert code == 0 and rows and all(float(r.split(",")[2]) <= 1e-6 for r in rows)
    code, doc, _ = run(capsys, "zeros", "3.1", "--T", "0.1", "--out", str(tmp_path))
    assert code == 0 and doc["result"]["count"] == 0
    assert len((tmp_path / "3_1_zeros.csv").read_text().splitlines()) == 1
    code, _, _ = run(capsys, "zeros", "3.1", "--T", "100", "--out", str(tmp_path))
    assert code == 2


def test_hamburger(capsys, tmp_path):
    code, doc, _ = run(capsys, "hamburger", "3.1", "4.1", "--n-max", "64", "--T", "30",
                       "--out", str(tmp_path))
    r = doc["result"]
    assert code == 0 and r["verdict"]["status"] == "REFUTED"
    zc = r["pole_experiment"]["zero_comparison"]
    assert zc["unmatched_1"] > 0 and zc["unmatched_2"] > 0 and not zc["matched"]
    saved = json.loads((tmp_path / "hamburger_3_1_4_1.json").read_text())
    assert saved == r
    code, doc, _ = run(capsys, "hamburger", "3.1", "3.1", "--out", str(tmp_path))
    assert code == 0 and doc["result"]["verdict"]["polynomial"] == {"1": [1.0, 0.0]}
    code, doc, err = run(capsys, "hamburger", "3.1", "5.even", "--out", str(tmp_path))
    assert code == 4 and "gamma mismatch" in err


def test_laplace(capsys, tmp_path):
    m = tmp_path / "fixture.json"
    m.write_text(json.dumps({"atoms": FIXTURE_ATOMS}))
    code, doc, _ = run(capsys, "laplace-reconstruct", str(m), "--a", "1.0", "--b", "1.3",
                       "--epsilon", "0.01", "--degree", "180", "--out", str(tmp_path))
    r = doc["result"]
    assert code == 0 and r["bound_satisfied"] and abs(r["estimate"][0] + 2) < 0.5
    e = tmp_path / "empty.json"
    e.write_text('{"atoms": []}')
    _, doc, _ = run(capsys, "laplace-reconstruct", str(e), "--a", "1.0", "--b", "1.3",
                    "--out", str(tmp_path))
    assert doc["result"]["estimate"] == [0.0, 0.0] and doc["result"]["error_bound"] == 0
    edge = tmp_path / "edge.json"
    edge.write_text("[[1.0, 1]]")
    _, doc, _ = run(capsys, "laplace-reconstruct", str(edge), "--a", "1.0", "--b", "1.3",
                    "--out", str(tmp_path))
    assert doc["result"]["boundary_ambiguous"] is True
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    code, _, _ = run(capsys, "laplace-reconstruct", str(bad), "--a", "1", "--b", "1.3")
    assert code == 2


def test_samples_input(capsys, tmp_path):
    from hamburger.laplace_measures import DiscreteMeasure, laplace_samples, samples_to_json
    mu = DiscreteMeasure.from_json(FIXTURE_ATOMS)
    f = tmp_path / "samples.json"
    f.write_text(json.dumps({"samples": samples_to_json(laplace_samples(mu, 40)),
                             "total_variation": 3.5}))
    code, doc, _ = run(capsys, "laplace-reconstruct", str(f), "--a", "1.0", "--b", "1.3",
                       "--epsilon", "0.05", "--degree", "40", "--out", str(tmp_path))
    assert code == 0 and doc["result"]["true_mass"] is None


def test_props_deterministic(capsys):
    _, d1, _ = run(capsys, "props", "--seed", "5")
    _, d2, _ = run(capsys, "props", "--seed", "5")
    assert d1["result"] == d2["result"] and d1["result"]["passed"]


def test_result_is_byte_identical(capsys, tmp_path):
    outs = []
    for _ in range(2):
        main(["zeros", "4.1", "--T", "12", "--out", str(tmp_path)])
        doc = json.loads(capsys.readouterr().out)
        outs.append(json.dumps(doc["result"], sort_keys=True))
    assert outs[0] == outs[1]


def test_config_and_env(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# settings\nT = 10\nout = {tmp_path / 'from_cfg'}\n")
    code, doc, _ = run(capsys, "--config", str(cfg), "zeros", "4.1")
    assert code == 0 and doc["result"]["t_max"] == 10
    assert (tmp_path / "from_cfg" / "4_1_zeros.csv").exists()
    monkeypatch.setenv("HAMBURGER_OUT", str(tmp_path / "from_env"))
    run(capsys, "zeros", "4.1", "--T", "8")
    assert (tmp_path / "from_env" / "4_1_zeros.csv").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "--config", str(bad), "zeros", "4.1")[0] == 2
    assert load_config(None) == {}


def test_parse_complex():
    assert parse_complex("0.5+3i") == 0.5 + 3j
    assert parse_complex(" 2 ") == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hamburger", "eval", "zeta", "--s", "2"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["result"]["value"][0] - math.pi ** 2 / 6) < 1e-12
