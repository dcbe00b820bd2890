import json

import pytest

import main
from services.iwasawa.lambda_element import LambdaElement
from services.io.coefficient_files import PairFileStore
from services.log_matrix.hecke import HeckeData
from services.sharp_flat.pair import SharpFlatPair


@pytest.fixture(autouse=True)
def no_precision_override(monkeypatch):
    monkeypatch.delenv("SHARPFLAT_PRECISION", raising=False)


@pytest.fixture
def table_file(tmp_path, synthetic_p3):
    path = tmp_path / "syn.mst"
    path.write_text(synthetic_p3.render())
    return path


def test_resolve_precision(monkeypatch):
    assert main.resolve_precision(12) == 12
    monkeypatch.setenv("SHARPFLAT_PRECISION", "17")
    assert main.resolve_precision(None) == 17
    monkeypatch.setenv("SHARPFLAT_PRECISION", "lots")
    assert main.resolve_precision(None) == 40


def test_extract_writes_pair_files(tmp_path, table_file, capsys):
    code = main.main(["extract", "--table", str(table_file), "--plain", "--precision", "20"])
    assert code == 0
    for suffix in (".sharp.coef", ".flat.coef", ".trace"):
        assert (tmp_path / f"syn{suffix}").exists()
    assert "syn.trace" in capsys.readouterr().out
    pair = PairFileStore().read_pair(tmp_path / "syn")
    assert (pair.level, pair.completed) == (3, False)


def test_extract_to_explicit_stem(tmp_path, table_file):
    out = tmp_path / "out" / "pair"
    assert main.main(["extract", "--table", str(table_file), "--plain", "--precision", "20",
                      "--level", "2", "--out", str(out)]) == 0
    assert PairFileStore().read_pair(out).level == 2


def test_analyze_lines_format(tmp_path, capsys):
    h = HeckeData(3, 0, prec=20)
    pair = SharpFlatPair(LambdaElement.from_poly(3, 2, [1, 1], 20), LambdaElement.from_poly(3, 2, [2, 0, 1], 20),
                         h, False, 0, 2)
    PairFileStore().write_pair(tmp_path / "hand", pair)
    code = main.main(["analyze", "--pair", str(tmp_path / "hand"), "--format", "lines"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert "created" not in report
    assert [(inv["component"], inv["mu"], inv["lam"]) for inv in report["invariants"]] == [
        ("sharp", "0", 0),
        ("flat", "0", 0),
    ]
    assert report["rank_bound"]["bound"] == 0
    assert [row["m"] for row in report["vanishing"]] == [0, 1, 2]
    assert report["header"]["level"] == "2"


def test_growth_rows(capsys):
    code = main.main(["growth", "--p", "3", "--ap", "0", "--lambda-sharp", "1", "--lambda-flat", "1",
                      "--n-max", "4", "--base-value", "--region"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert "region v=inf mu_sharp-mu_flat=0: odd n -> sharp, even n -> flat" in lines
    assert "n=2 star=flat branch=parity growth=3 total=3 g_n=3" in lines
    assert "n=3 star=sharp branch=parity growth=7 total=10 g_n=7" in lines


def test_growth_lines_format(capsys):
    assert main.main(["growth", "--p", "3", "--ap", "0", "--n-max", "3", "--format", "lines"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.startswith("{")]
    assert [row["n"] for row in rows] == [2, 3]
    assert rows[0]["star"] == "flat"


def test_growth_rejects_composite_p():
    assert main.main(["growth", "--p", "4", "--ap", "0"]) == 2


def test_growth_needs_parameters():
    assert main.main(["growth"]) == 2


def test_verify_empty_table(tmp_path):
    path = tmp_path / "empty.mst"
    path.write_text("")
    assert main.main(["verify", "--table", str(path)]) == 2


def test_verify_missing_file(tmp_path):
    assert main.main(["verify", "--table", str(tmp_path / "absent.mst")]) == 2


@pytest.mark.slow
def test_verify_consistent_table(tmp_path, supersingular_table, capsys):
    path = tmp_path / "ss.mst"
    path.write_text(supersingular_table.render())
    report = tmp_path / "ss.report"
    code = main.main(["verify", "--table", str(path), "--plain", "--no-fe", "--precision", "20",
                      "--report", str(report)])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "PASS queue(p=3, a_p=0, i=0)" in out
    assert "PASS symmetry(p=3, sign=+1)" in out
    assert "PASS hat_invariance(p=3, level=3)" in out
    assert "FAIL" not in out
    assert report.read_text() == out


@pytest.mark.slow
def test_verify_ordinary_table(tmp_path, ordinary_table, capsys):
    path = tmp_path / "ord.mst"
    path.write_text(ordinary_table.render())
    code = main.main(["verify", "--table", str(path), "--no-fe", "--precision", "20"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "PASS hat_invariance(p=5, level=2)" in out


@pytest.mark.slow
def test_verify_synthetic_table_skips_eigenform_lines(table_file, capsys):
    code = main.main(["verify", "--table", str(table_file), "--plain", "--precision", "20"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "SKIP interpolation_at_zero :: synthetic table: no eigenform behind the symbols" in out
    assert "SKIP special_values :: synthetic table: no eigenform behind the symbols" in out
    assert "SKIP functional_equation :: synthetic table: no eigenform behind the symbols" in out
    assert "FAIL" not in out
