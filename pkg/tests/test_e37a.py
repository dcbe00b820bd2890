"""The curve 37a1 at the supersingular prime 3: committed modular symbols through every command"""
import pytest

import main
from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.mazur_tate.theta import queue_from_table, symmetry_check, validate_queue
from services.sharp_flat.analysis import gcd_structure, greenberg_report, vanishing_orders
from services.sharp_flat.extraction import extract_from_table, reconstruction_check
from services.sharp_flat.identities import functional_equation_check, main_theorem_check, special_value_table_check
from services.tropical.growth import rank_bound

PREC = 20


@pytest.fixture(autouse=True)
def no_precision_override(monkeypatch):
    monkeypatch.delenv("SHARPFLAT_PRECISION", raising=False)


def test_table_header(e37a_table):
    assert (e37a_table.p, e37a_table.nmax, e37a_table.hecke.a, e37a_table.hecke.level_nf) == (3, 4, -3, 37)
    assert not e37a_table.synthetic
    assert e37a_table.zero_symbol() == 0
    assert symmetry_check(e37a_table).passed
    assert validate_queue(queue_from_table(e37a_table, 0, prec=PREC)).passed


def test_mazur_tate_elements_obey_the_functional_equation(e37a_table):
    q = queue_from_table(e37a_table, 0, prec=PREC)
    for n in (2, 3, 4):
        theta = q.thetas[n]
        # log_γ 37 = 6 for γ = 7
        factor = LambdaElement.group_like(3, n, -6, PREC)
        assert theta == -(factor * theta.involution())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_extracted_invariants(e37a_table, n):
    pair, trace = extract_from_table(e37a_table, 0, n)
    assert pair.completed
    assert all(step.remainder_zero for step in trace.steps)
    invariants = pair.invariants()
    assert (invariants["sharp"].mu, invariants["sharp"].lam) == (0, 1)
    assert (invariants["flat"].mu, invariants["flat"].lam) == (0, 5)
    assert reconstruction_check(pair, queue_from_table(e37a_table, 0).truncated(n)).passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_extracted_pair_obeys_the_functional_equation(e37a_table, n):
    pair, _ = extract_from_table(e37a_table, 0, n)
    result = functional_equation_check(pair)
    assert result.passed, result.errors
    assert result.metadata["log_gamma_nf"] == 6


def test_functional_equation_detects_a_wrong_level(e37a_table):
    pair, _ = extract_from_table(e37a_table, 0, 3)
    assert not functional_equation_check(pair, level_nf=43).passed


@pytest.mark.parametrize("n", [2, 3])
def test_main_theorem(e37a_table, n):
    result = main_theorem_check(e37a_table, 0, n)
    assert result.passed, result.errors
    assert result.metadata["columns"] == ["alpha", "beta"]


def test_special_values_vanish_at_rank_one(e37a_table):
    pair, _ = extract_from_table(e37a_table, 0, 3)
    with pytest.raises(Undetermined):
        special_value_table_check(pair)


def test_zeros_of_the_pair(e37a_table):
    pair, _ = extract_from_table(e37a_table, 0, 3)
    rows = vanishing_orders(pair)
    assert all(row.equiroots for row in rows)
    structure, result = gcd_structure(pair)
    assert result.passed, result.errors
    assert structure.t_exponent == 1
    assert all(row.consistent for row in structure.rows)
    report = greenberg_report(pair)
    assert report.lambda_min == 1


def test_rank_bound():
    bound = rank_bound(3, 1, 5)
    assert (bound.nu_sharp, bound.nu_flat, bound.nu, bound.bound) == (0, 2, 2, 7)


def test_analyze_from_table(e37a_table_path, capsys):
    code = main.main(["analyze", "--table", str(e37a_table_path), "--precision", str(PREC)])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert "invariants sharp mu=0 lambda=1" in lines
    assert "invariants flat mu=0 lambda=5" in lines
    assert "rank nu_sharp=0 nu_flat=2 nu=2 bound=7 lambda_sum=6" in lines
    assert "queue plus mu=0 lambda=1" in lines
    assert "queue minus mu=0 lambda=5" in lines


def test_extract_then_growth(tmp_path, e37a_table_path, capsys):
    stem = tmp_path / "e37a"
    assert main.main(["extract", "--table", str(e37a_table_path), "--precision", str(PREC),
                      "--out", str(stem)]) == 0
    capsys.readouterr()
    assert main.main(["growth", "--pair", str(stem), "--n-max", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "# lambda_sharp=1" in lines
    assert "# lambda_flat=5" in lines
    assert any(line.startswith("n=4 ") for line in lines)


@pytest.mark.slow
def test_verify_is_clean(e37a_table_path, capsys):
    code = main.main(["verify", "--table", str(e37a_table_path), "--precision", str(PREC)])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "PASS functional_equation(hat(p=3, a_p=-3, i=0, n=4), N_f=37, untwisted)" in out
    assert "PASS hat_invariance(p=3, level=4)" in out
    assert "PASS main_theorem(p=3, i=0, n=4, hat(p=3, a_p=-3, i=0, n=4))" in out
    assert "FAIL" not in out
