import io
import json

import jsonschema
import pytest

from zigzag.cli import main
from zigzag.config import load_config, parse_config_text

with open("docs/schema.json", "r", encoding="utf-8") as fh:
    SCHEMA = json.load(fh)


def run_cli(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def validate(document):
    jsonschema.validate(document, SCHEMA)


def test_predict_documented_example():
    code, text = run_cli(["predict", "--p", "5", "--k", "24", "--ap", "p"])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    assert doc["kind"] == "red"
    assert doc["summands"] == [{"a": 2, "lambda": "3"}, {"a": 1, "lambda": "2"}]
    assert doc["provenance"] == "THEOREM_BGR18"


def test_predict_markdown():
    code, text = run_cli(["predict", "--p", "7", "--k", "11", "--ap", "p^(3/2)", "--md"])
    assert code == 0
    assert "ind(w2^10)" in text
    assert "THEOREM_GR19" in text
    assert "**[*]**" in text


def test_outputs_byte_deterministic():
    for argv in (["predict", "--p", "5", "--k", "24", "--ap", "p"],
                 ["sweep", "--p", "5", "--k-range", "9:21:4", "--ap", "p^(3/2)"],
                 ["filtration", "--p", "7", "--r", "15", "--imax", "2"],
                 ["check", "--suite", "determinant", "--json"]):
        _, first = run_cli(argv)
        _, second = run_cli(argv)
        assert first.encode() == second.encode()


def test_sweep_csv_columns():
    code, text = run_cli(["sweep", "--p", "5", "--k-range", "9:13:4",
                          "--ap", "p^(3/2)", "--emit", "csv"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "p,k,ap,v,b,tau,t,case,rep,provenance"
    assert len(lines) == 3


def test_sweep_figure(tmp_path):
    fig = tmp_path / "sweep.png"
    csv_out = tmp_path / "sweep.csv"
    code, _ = run_cli(["sweep", "--p", "5", "--k-range", "9:29:4",
                       "--ap", "p^(3/2)", "--out", str(csv_out),
                       "--figure", str(fig)])
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 1000
    assert csv_out.exists()
    assert csv_out.read_text().startswith("p,k,ap,")


def test_filtration_json_schema_and_values():
    code, text = run_cli(["filtration", "--p", "7", "--r", "15", "--imax", "2"])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    dims = [row["dim"] for row in doc["rows"]]
    assert dims == [16, 8, 0]
    assert doc["identities"]["all_ok"]


def test_llc_map_unmap_roundtrip():
    code, text = run_cli(["llc", "--p", "7", "--map", '{"kind":"irred","c":4}'])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    assert doc["labels"] == [{"r": 3, "lambda": "0", "eta_omega": 0,
                              "eta_unramified": "1"}]
    code, text = run_cli(["llc", "--p", "7", "--unmap",
                          '[{"r":3,"lambda":"0","eta_omega":0}]'])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    assert doc["rep"] == {"kind": "irred", "c": 4, "z": "1"}


def test_hecke_json():
    code, text = run_cli(["hecke", "--p", "5", "--r", "0", "--coeffs", "fp",
                          "--apply-t", "1"])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    assert len(doc["support"]) == 6
    assert doc["support_radius"] == 1


def test_check_exit_codes():
    code, text = run_cli(["check", "--suite", "local-constancy", "--json"])
    assert code == 0
    doc = json.loads(text)
    validate(doc)
    assert doc["ok"]
    conflict_rows = [r for r in doc["rows"] if r["verdict"] == "CONFLICT"]
    assert {(r["k"], r["t_prime"]) for r in conflict_rows} == {
        (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3)}


def test_usage_errors_exit_2():
    code, _ = run_cli(["predict", "--p", "5", "--k", "24", "--ap", "1+p"])
    assert code == 2
    code, _ = run_cli(["predict", "--p", "5", "--k", "24", "--ap", "p^(1/3)"])
    assert code == 2


def test_config_parsing(tmp_path):
    text = """
# comment
precision = 10
residue_degree = 1
caveat_exponent = 2
strict_conjecture = false
exclude_ap = p^2; 2*p^2
"""
    values = parse_config_text(text)
    assert values == {"precision": 10, "residue_degree": 1, "caveat_exponent": 2,
                      "strict_conjecture": False, "exclude_ap": ("p^2", "2*p^2")}
    path = tmp_path / "zigzag.cfg"
    path.write_text(text)
    cfg = load_config(str(path), precision=8)
    assert cfg.precision == 8       # flag overrides file
    assert cfg.residue_degree == 1
    with pytest.raises(ValueError):
        parse_config_text("nonsense")
    with pytest.raises(ValueError):
        parse_config_text("bogus_key = 3")


def test_config_flag_reaches_engine():
    # with f = 1 the unit symbol is rejected
    code, _ = run_cli(["--f", "1", "predict", "--p", "7", "--k", "10", "--ap", "u*p"])
    assert code == 2
    code, text = run_cli(["--f", "2", "predict", "--p", "7", "--k", "10", "--ap", "u*p"])
    assert code == 0
    doc = json.loads(text)
    assert doc["kind"] == "red"
    assert {s["lambda"] for s in doc["summands"]} == {"2*x", "6*x"}
