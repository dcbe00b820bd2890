from dataclasses import replace

import pytest

from services.errors import DenominatorViolation, IncompleteLevel, ParseError, RelationViolated
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import load_table, parse_table, units_mod
from services.mazur_tate.theta import (
    character_sign,
    level_one_reconstruction,
    queue_from_table,
    symmetry_check,
    tame_order,
    validate_queue,
)
from services.sharp_flat.synthetic import queue_thetas

HEADER = ["p=3", "nmax=0", "sign=+", "ap=0"]


def test_units_and_tame_order():
    assert units_mod(3, 2) == [1, 2, 4, 5, 7, 8]
    assert units_mod(5, 0) == [0]
    assert tame_order(2) == 2
    assert tame_order(7) == 6
    assert character_sign(5, 3) == -1


def test_consistent_table_is_symmetric(supersingular_table):
    result = symmetry_check(supersingular_table)
    assert result.passed
    assert result.metadata["entries_checked"] > 0


def test_broken_symmetry_is_reported(supersingular_table):
    entries = dict(supersingular_table.entries)
    entries[(2, 1)] += 1
    broken = replace(supersingular_table, entries=entries)
    assert not symmetry_check(broken).passed


@pytest.mark.parametrize("fixture", ["supersingular_table", "ordinary_table"])
def test_queue_relation_holds(fixture, request):
    table = request.getfixturevalue(fixture)
    result = validate_queue(queue_from_table(table, 0))
    assert result.passed
    assert result.metadata["bottom_used"]


def test_perturbed_table_violates_queue_relation(supersingular_table):
    entries = dict(supersingular_table.entries)
    entries[(3, 1)] += 1
    entries[(3, 26)] += 1
    perturbed = replace(supersingular_table, entries=entries)
    with pytest.raises(RelationViolated) as info:
        validate_queue(queue_from_table(perturbed, 0))
    assert info.value.level == 2


def test_queue_validation_needs_three_levels(supersingular_table):
    with pytest.raises(ValueError):
        validate_queue(queue_from_table(supersingular_table, 0).truncated(1))


def test_sign_mismatch_is_rejected(supersingular_table):
    with pytest.raises(ValueError):
        queue_from_table(supersingular_table, 1)


def test_level_one_symbols_are_recovered(supersingular_table):
    assert level_one_reconstruction(supersingular_table).passed


def test_render_then_parse(supersingular_table, synthetic_p3):
    for table in (supersingular_table, synthetic_p3):
        parsed = parse_table(table.render().splitlines(), prec=20)
        assert parsed.entries == table.entries
        assert parsed.header() == table.header()


def test_synthetic_table_reproduces_its_queue(upsilon_p3, synthetic_p3):
    q = queue_from_table(synthetic_p3, 0)
    expected = queue_thetas(upsilon_p3, HeckeData(3, 0, prec=20), 3)
    assert all(got == want for got, want in zip(q.thetas, expected))
    assert validate_queue(q).passed


def test_missing_header():
    with pytest.raises(ParseError, match="missing header 'ap'"):
        parse_table(["p=3", "nmax=0", "sign=+", "1 1 0", "1 2 0"])


def test_empty_input():
    with pytest.raises(ParseError):
        parse_table([])


def test_unknown_header():
    with pytest.raises(ParseError, match="unknown header"):
        parse_table(HEADER + ["curve=37a1"])


def test_non_prime_p():
    with pytest.raises(ParseError):
        parse_table(["p=4", "nmax=0", "sign=+", "ap=0"])


def test_incomplete_level():
    with pytest.raises(IncompleteLevel) as info:
        parse_table(HEADER + ["1 1 1"])
    assert (info.value.level, info.value.missing) == (1, 1)


def test_denominator_violation():
    with pytest.raises(DenominatorViolation):
        parse_table(HEADER + ["1 1 1/2", "1 2 1/2"])
    table = parse_table(HEADER + ["denbound=2", "1 1 1/2", "1 2 1/2"])
    assert table.denbound == 2


def test_non_unit_residue():
    with pytest.raises(ParseError, match="not a reduced unit"):
        parse_table(HEADER + ["1 3 1"])


def test_comments_and_blank_lines_are_ignored():
    table = parse_table(["# 3-adic test table", ""] + HEADER + ["1 1 2", "", "1 2 2"])
    assert table.level_values(1) == {1: 2, 2: 2}
    assert not table.has_bottom


def test_curve_37a_symbols_satisfy_the_queue_relation(e37a_table_path):
    table = load_table(e37a_table_path, prec=20)
    assert (table.p, table.hecke.a, table.hecke.level_nf) == (3, -3, 37)
    assert table.source_sha256
    assert symmetry_check(table).passed
    assert validate_queue(queue_from_table(table, 0, prec=20)).passed
