import dataclasses
import io
import json

import pytest

from conezeta import cli
from conezeta.cone_geometry import ConeSpec
from conezeta.cone_integral import ConeIntegralData, load_resolution
from conezeta.examples import data_path, get_example, read_data
from conezeta.exact_algebra import RationalFunctionS, mr_canonical_text
from conezeta.lie_input import LieAlgebraZ


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def data_file(*parts):
    return str(data_path(*parts))


# -- verify -----------------------------------------------------------------


@pytest.mark.parametrize("args", [("--example", "heisenberg"), ("--example", "abelian", "--rank", "3"), ("--example", "sl2")])
def test_verify_passes(args):
    code, text = run("verify", *args)
    assert code == 0, text
    assert "FAIL" not in text and text.rstrip().endswith("all checks passed")


def test_verify_heisenberg_report_contents():
    _, text = run("verify", "--example", "heisenberg")
    for check in ("12-piece table", "edge constants", "zeta_geom", "zeta_p", "zeta_top", "oracle p=2", "oracle p=3"):
        assert f"PASS  {check}" in text
    assert "(0,1,1)" in text


def test_verify_is_byte_identical():
    assert run("verify", "--example", "heisenberg") == run("verify", "--example", "heisenberg")
    assert run("verify", "--example", "sl2", "--format", "json") == run("verify", "--example", "sl2", "--format", "json")


def test_verify_reports_mismatch(monkeypatch):
    real = get_example("heisenberg")
    broken = dataclasses.replace(real, ztop=RationalFunctionS.reciprocal_product([(1, 1)]))
    monkeypatch.setattr(cli, "get_example", lambda name, rank=None: broken)
    code, text = run("verify", "--example", "heisenberg")
    assert code == 1
    assert "FAIL  zeta_top" in text and "MISMATCH" in text


def test_verify_json():
    code, text = run("verify", "--example", "abelian", "--rank", "2", "--format", "json")
    report = json.loads(text)
    assert code == 0 and report["ok"] and report["example"] == "abelian_2"


# -- golden files -----------------------------------------------------------


@pytest.mark.parametrize("name", ["abelian_1", "abelian_2", "abelian_3", "heisenberg", "sl2"])
def test_golden_files_match_targets(name):
    ex = get_example(name)
    assert mr_canonical_text(ex.zgeom, ex.zgeom_den) == cli.golden_text(ex, "zeta_geom")
    assert mr_canonical_text(ex.P, ex.P_den) == cli.golden_text(ex, "zeta_p")
    assert str(ex.ztop) == cli.golden_text(ex, "zeta_top")


@pytest.mark.parametrize("name,rank", [("abelian", "1"), ("abelian", "2"), ("heisenberg", "3"), ("sl2", "3")])
def test_commands_print_golden_text(name, rank):
    ex = get_example(name, int(rank))
    assert run("zeta-geom", "--example", name, "--rank", rank)[1].strip() == cli.golden_text(ex, "zeta_geom")
    assert run("zeta-p", "--example", name, "--rank", rank)[1].strip() == cli.golden_text(ex, "zeta_p")
    assert run("zeta-top", "--example", name, "--rank", rank)[1].strip() == cli.golden_text(ex, "zeta_top")


# -- individual commands ----------------------------------------------------


def test_zeta_top_on_sl2_resolution_file():
    code, text = run("zeta-top", "--input", data_file("resolution", "sl2.json"))
    assert code == 0 and text.strip() == "(3*s+8)/(2*(s+2)^2*(s+3)*(2*s+5))"


def test_decompose_table():
    code, text = run("decompose", "--input", data_file("cone", "heisenberg.json"))
    lines = text.splitlines()
    assert code == 0
    assert lines[4].split() == ["R_k", "|I_k|", "|M_k|", "E°_I_k"]
    assert len(lines) == 4 + 1 + 12
    assert lines[5].split() == ["0", "0", "0", "(L", "-", "1)^3"]
    assert "A=2 B=4" in text


def test_decompose_bare_cone_json(tmp_path):
    path = tmp_path / "cone.json"
    path.write_text(json.dumps(ConeSpec(3).to_json()))
    code, text = run("decompose", "--input", str(path), "--format", "json")
    (chart,) = json.loads(text)["charts"]
    assert code == 0 and len(chart["pieces"]) == 8


def test_series_commands():
    assert run("series", "--example", "heisenberg", "--order", "4", "--p", "2")[1].split()[1::2] == [
        "1", "3", "19", "43", "203"
    ]
    code, text = run("series", "--example", "abelian", "--rank", "1", "--order", "2")
    assert code == 0 and text.splitlines() == ["T^0: 1", "T^1: 1", "T^2: 1"]


def test_series_from_lie_input_derives_the_data():
    code, text = run("series", "--input", data_file("lie", "heisenberg.json"), "--order", "3", "--p", "3", "--format", "json")
    assert code == 0 and json.loads(text)["coefficients"] == ["1", "4", "49", "157"]


def test_oracle_command():
    code, text = run("oracle", "--example", "heisenberg", "--p", "2", "--n", "2", "--format", "json")
    result = json.loads(text)
    assert code == 0
    assert {k: result[k] for k in ("p", "n", "mode", "count")} == {"p": 2, "n": 2, "mode": "subalgebra", "count": 19}
    assert "elapsed_ms" in result
    code, text = run("oracle", "--example", "heisenberg", "--p", "3", "--n", "2", "--mode", "ideal")
    assert code == 0 and "count=13" in text
    code, text = run("oracle", "--q", "3", "--n", "2")
    assert code == 0 and "count=13" in text


# -- exit codes -------------------------------------------------------------


def test_unknown_example_exit_code():
    assert run("verify", "--example", "virasoro")[0] == 4
    assert run("zeta-top", "--example", "nope")[0] == 4


@pytest.mark.parametrize(
    "argv",
    [
        ("frobnicate",),
        ("series", "--example", "heisenberg"),
        ("oracle", "--example", "heisenberg", "--n", "2"),
        ("oracle", "--example", "heisenberg", "--p", "4", "--n", "1"),
        ("verify",),
        ("zeta-top",),
        ("zeta-geom", "--example", "heisenberg", "--input", "x.json"),
        ("zeta-p", "--example", "heisenberg", "--mode", "ideal"),
        ("verify", "--example", "heisenberg", "--rank", "2"),
        ("series", "--example", "heisenberg", "--order", "-1"),
        ("oracle", "--q", "6", "--n", "1"),
        ("zeta-geom", "--input", "/nonexistent/file.json"),
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        code = cli.main(list(argv), io.StringIO())
        raise SystemExit(code)
    assert info.value.code == 2


def test_non_monomial_lie_input_is_a_usage_error():
    assert run("zeta-geom", "--input", data_file("lie", "sl2.json"))[0] == 2


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        "[1, 2]",
        '{"mystery": 1}',
        '{"t": 2, "inequalities": [{"f": [1], "g": [0, 1]}]}',
        '{"dim": 3, "brackets": {"1,2": {"1": 1}, "2,3": {"2": 1}, "1,3": {"3": 1}}}',
    ],
)
def test_schema_errors(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert run("decompose", "--input", str(path))[0] == 3


def test_non_monomial_cone_data_is_a_schema_error():
    assert run("zeta-geom", "--input", data_file("cone", "sl2.json"))[0] == 3


# -- data files -------------------------------------------------------------


def _data_files(kind):
    return sorted(p.name for p in data_path(kind).iterdir() if p.name.endswith(".json"))


@pytest.mark.parametrize("name", _data_files("lie"))
def test_lie_files_roundtrip(name):
    data = read_data("lie", name)
    a = LieAlgebraZ.from_json(data)
    again = LieAlgebraZ.from_json(json.loads(json.dumps(a.to_json())))
    assert again == a and again.to_json() == a.to_json()


@pytest.mark.parametrize("name", _data_files("cone"))
def test_cone_files_roundtrip(name):
    c = ConeIntegralData.from_json(read_data("cone", name))
    again = ConeIntegralData.from_json(json.loads(json.dumps(c.to_json())))
    assert again == c and again.to_json() == c.to_json()


@pytest.mark.parametrize("name", _data_files("resolution"))
def test_resolution_files_roundtrip(name):
    charts = load_resolution(read_data("resolution", name))
    again = load_resolution({"charts": [json.loads(json.dumps(r.to_json())) for r in charts]})
    assert again == charts
    assert [r.to_json() for r in again] == [r.to_json() for r in charts]
