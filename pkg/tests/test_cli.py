import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from tilinglab.cli import main
from tilinglab.regions import HSpec

HEX111 = '{"shape":"hexagon","a":1,"b":1,"c":1}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tgf_hexagon(capsys):
    code, out, _ = run(capsys, "tgf", "--region", HEX111)
    assert code == 0
    assert json.loads(out) == {"tgf": [[1, 0, 0, "1"], [-1, 0, 0, "1"]], "count": 2}


def test_tgf_engines_agree(capsys):
    spec = '{"shape":"trapezoid","x":2,"y":2,"Z":[-3,1]}'
    outs = {}
    for eng in ("dp", "dfs", "both"):
        code, out, _ = run(capsys, "tgf", "--region", spec, "--engine", eng)
        assert code == 0
        outs[eng] = json.loads(out)
    assert outs["dp"] == outs["dfs"] == outs["both"]


def test_tgf_split_on_dented_hexagon(capsys):
    spec = json.dumps(HSpec(1, 0, 0, 2, 2, (-6, 6), (-4, 0)).to_json())
    a = run(capsys, "tgf", "--region", spec, "--engine", "split")
    b = run(capsys, "tgf", "--region", spec)
    assert a[0] == b[0] == 0 and a[1] == b[1]


def test_tgf_points_mode(capsys):
    code, out, _ = run(capsys, "tgf", "--region", HEX111, "--mode", "points:2")
    assert code == 0
    assert json.loads(out) == {"points": {"2": "5/2", "3": "10/3"}}


def test_unbalanced_region_has_empty_tgf(capsys):
    code, out, _ = run(capsys, "tgf", "--region", '{"shape":"trapezoid","x":2,"y":1}')
    assert code == 0
    assert json.loads(out) == {"tgf": [], "count": 0}


def test_region_from_file(capsys, tmp_path):
    f = tmp_path / "r.json"
    f.write_text(HEX111)
    code, out, _ = run(capsys, "tgf", "--region", f"@{f}")
    assert code == 0 and json.loads(out)["count"] == 2


@pytest.mark.parametrize("argv", [
    ["tgf", "--region", "{not json"],
    ["tgf", "--region", '{"shape":"pentagon"}'],
    ["tgf", "--region", HEX111, "--mode", "points:x"],
    ["verify", "--suite", "nope"],
    ["verify", "--suite", "lemma41", "--mode", "exact"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_cap_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("TILINGLAB_CAPS", '{"dfs_triangles": 4}')
    code, _, err = run(capsys, "tgf", "--region", HEX111, "--engine", "dfs")
    assert code == 3
    assert json.loads(err)["error"] == "cap"


def test_failing_suite_exit_4_and_replay(capsys, tmp_path):
    report = tmp_path / "rep.json"
    code, _, _ = run(capsys, "verify", "--suite", "thm34-A", "--samples", "1",
                     "--variant", "proof", "--out", str(report))
    assert code == 4
    data = json.loads(report.read_text())
    assert data["counts"]["fail"] > 0
    witness = tmp_path / "w.json"
    witness.write_text(json.dumps(data["failures"][0]))
    code, out, _ = run(capsys, "replay", "--witness", f"@{witness}")
    assert code == 4
    res = json.loads(out)
    assert res["status"] == "fail"
    assert (res["lhs"], res["rhs"]) == (data["failures"][0]["lhs"], data["failures"][0]["rhs"])
    code, out, _ = run(capsys, "replay", "--witness", f"@{report}")
    assert code == 4 and len(json.loads(out)) == data["counts"]["fail"]


def test_verify_passing_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma41", "--samples", "2", "--max", "3")
    assert code == 0
    assert json.loads(out)["counts"]["fail"] == 0
    code, out, _ = run(capsys, "verify", "--suite", "kuo", "--samples", "1", "--max", "2", "--format", "text")
    assert code == 0 and out.startswith("kuo: pass")


def test_render_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "render", "--region", HEX111)
    assert code == 0 and out.strip()
    code, out, _ = run(capsys, "render", "--region", HEX111, "--format", "json")
    d = json.loads(out)
    assert d["spec"] == {"shape": "hexagon", "a": 1, "b": 1, "c": 1, "k": 0, "xy": False}
    assert len(d["region"]["tris"]) == 6
    svg = tmp_path / "h.svg"
    assert run(capsys, "render", "--region", HEX111, "--out", str(svg))[0] == 0
    assert ET.parse(svg).getroot().tag.endswith("svg")


def test_rendered_region_json_round_trips(capsys):
    spec = json.dumps(HSpec(1, 1, 0, 2, 0, (-3, 3), (-5, 5), (), True).to_json())
    _, out, _ = run(capsys, "render", "--region", spec, "--format", "json")
    d = json.loads(out)
    assert HSpec.from_json(d["spec"]) == HSpec.from_json(json.loads(spec))
    _, a, _ = run(capsys, "tgf", "--region", json.dumps(d["region"]))
    _, b, _ = run(capsys, "tgf", "--region", spec)
    assert a == b


def test_formula_commands(capsys):
    code, out, _ = run(capsys, "formula", "macmahon", "--instance", '{"a":2,"b":3,"c":4}')
    assert code == 0 and json.loads(out) == {"value": 490}
    code, out, _ = run(capsys, "formula", "hexagon", "--instance", '{"a":1,"b":1,"c":1}')
    assert json.loads(out)["at_q1"] == "2"
    spec = HSpec(1, 0, 0, 2, 2, (-6, 6), (-4, 0))
    flipped = spec.flip((-6, 6), ())
    inst = json.dumps({"spec": spec.to_json(), "flipped": flipped.to_json()})
    _, a, _ = run(capsys, "formula", "thm31", "--instance", inst)
    _, b, _ = run(capsys, "formula", "shuffle", "--instance", inst)
    assert json.loads(a)["at_q1"] == json.loads(b)["at_q1"]
    fam = '{"family":"A","x":1,"y":1,"z":2,"w":1,"arms":[1,1,1],"lhs":true}'
    code, out, _ = run(capsys, "formula", "thm34", "--instance", fam)
    d = json.loads(out)
    assert code == 0 and d["lhs"]["at_q1"] == d["rhs"]["at_q1"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tilinglab", "tgf", "--region", HEX111],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 2
