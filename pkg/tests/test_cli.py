import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from fanobound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_table(capsys):
    code, out, _ = run(capsys, "classify")
    assert code == 0
    assert "admissible classes: 14" in out
    rows = [l for l in out.splitlines() if l[:4].strip().isdigit() and not l.startswith("No.")]
    assert len(rows) == 14


def test_classify_single_entry(capsys):
    code, out, _ = run(capsys, "classify", "--entry", "18")
    assert code == 0
    assert "No.18: Excluded" in out
    assert "eu(D1) <= 1" in out and "eu(D1) >= 2" in out


def test_classify_json_schema_and_determinism(capsys):
    schema = json.loads(resources.files("fanobound").joinpath("data/certificate.schema.json").read_text())
    _, a, _ = run(capsys, "classify", "--json")
    _, b, _ = run(capsys, "--json", "classify")
    assert a == b
    jsonschema.validate(json.loads(a), schema)


def test_corrupted_catalog_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("schema = 1\n")
    code, _, err = run(capsys, "classify", "--catalog", str(p))
    assert code == 2 and "ValidationError" in err


def test_missing_catalog_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "classify", "--catalog", str(tmp_path / "nope.toml"))
    assert code == 2


def test_missing_fact_exit_1(capsys, tmp_path):
    text = resources.files("fanobound").joinpath("data/facts.toml").read_text()
    start = text.index('id = "qi02-quintic-one-line"')
    start = text.rfind("[[fact]]", 0, start)
    end = text.find("[[fact]]", start + 1)
    p = tmp_path / "facts.toml"
    p.write_text(text[:start] + text[end:])
    code, _, err = run(capsys, "classify", "--facts", str(p))
    assert code == 1 and "FactError" in err


@pytest.mark.parametrize(
    "argv, want",
    [
        (["surface", "genus", "--ruled", "1,3", "--class", "2,4"], "2"),
        (["surface", "genus", "--ruled", "0,1", "--class", "1,2"], "0"),
        (["surface", "intersect", "--ruled", "0,2", "--class", "1,0", "--with", "1,0"], "-2"),
        (["surface", "solve-genus", "--ruled", "1,3", "--target", "2"], "(2,4) (3,5)"),
    ],
)
def test_surface(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == want


def test_surface_parse_error(capsys):
    code, _, _ = run(capsys, "surface", "genus", "--ruled", "x", "--class", "1,1")
    assert code == 2


def test_surface_invalid_surface(capsys):
    code, _, _ = run(capsys, "surface", "genus", "--ruled", "0,-1", "--class", "1,1")
    assert code == 2


def test_lattice_commands(capsys):
    code, out, _ = run(capsys, "lattice", "solve-boundary", "--mu", "1", "1")
    assert code == 0 and len(out.strip().splitlines()) == 2
    code, out, _ = run(capsys, "--json", "lattice", "solve-boundary", "--mu", "2", "2")
    assert json.loads(out)["decompositions"] == []
    code, out, _ = run(capsys, "lattice", "anticanonical", "--mu", "2", "3")
    assert out.strip() == "-K = 3*H1 + 2*H2"
    code, out, _ = run(capsys, "lattice", "blowup", "--ambient", "P3", "--genus", "1", "--degree", "4")
    assert "(-K)^3 = 32" in out


def test_window(capsys):
    code, out, _ = run(capsys, "--json", "window", "--ambient", "P3", "--genus", "1", "--degree", "3")
    d = json.loads(out)
    assert code == 0 and (d["lower"], d["upper"], d["feasible"]) == (2, 4, True)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "beta")
    assert code == 0 and "beta: pass" in out
    code, out, _ = run(capsys, "verify", "example-4-11")
    assert code == 0 and "final ring: 3 free variables" in out
    code, _, _ = run(capsys, "verify", "affine-chain")
    assert code == 0


def test_verify_failing_chain_exit_1(capsys, tmp_path):
    text = resources.files("fanobound").joinpath("data/affine_chain.toml").read_text()
    bad = text.replace('forward = { x0 = "x0 + 1 + x2*w" }', 'forward = { x0 = "x0 + 1 - x2*w" }')
    assert bad != text
    p = tmp_path / "chain.toml"
    p.write_text(bad)
    code, out, _ = run(capsys, "verify", "example-4-11", "--chain", str(p))
    assert code == 1 and "FAIL" in out


def test_screen_command(capsys):
    code, out, _ = run(capsys, "screen", "25")
    assert code == 0 and "construction A1" in out
    code, _, _ = run(capsys, "screen", "99")
    assert code == 2
    code, _, _ = run(capsys, "screen")
    assert code == 2


def test_facts_command(capsys):
    code, out, _ = run(capsys, "--json", "facts")
    assert code == 0 and len(json.loads(out)) >= 20


def test_unknown_subcommand(capsys):
    assert run(capsys, "plot")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fanobound", "verify", "beta"], capture_output=True, text=True)
    assert r.returncode == 0 and "pass" in r.stdout


def test_window_rejects_degree_zero(capsys):
    assert main(["window", "--ambient", "P3", "--genus", "0", "--degree", "0"]) == 2
