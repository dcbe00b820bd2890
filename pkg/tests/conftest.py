"""Shared fixtures: small Hecke-consistent and synthetic tables"""
from fractions import Fraction
from pathlib import Path

import pytest

from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import hecke_consistent_table, load_table
from services.sharp_flat.synthetic import synthetic_table_from_pair
from services.sharp_flat.tower import TowerPolynomial

FIXTURES = Path(__file__).parent / "fixtures"
PREC = 20


def seeded_values(seed: int):
    """Deterministic small integers standing in for free modular symbols"""
    def values(big_n: int, a: int) -> Fraction:
        return Fraction((seed * 7 + 5 * big_n + 3 * a) % 11 - 5)
    return values


@pytest.fixture
def supersingular_table():
    return hecke_consistent_table(3, 0, 3, seeded_values(1), prec=PREC)


@pytest.fixture
def ordinary_table():
    return hecke_consistent_table(5, 2, 2, seeded_values(2), prec=PREC)


@pytest.fixture
def upsilon_p3():
    y1 = TowerPolynomial.from_coeffs(3, [2, 1, 0, 4], PREC)
    y2 = TowerPolynomial.from_coeffs(3, [1, 3, 1], PREC)
    return y1, y2


@pytest.fixture
def synthetic_p3(upsilon_p3):
    return synthetic_table_from_pair(upsilon_p3, HeckeData(3, 0, prec=PREC), 3)


@pytest.fixture
def e37a_table_path():
    """Plus symbols of 37a1 at p = 3 up to level 4, written by scripts/generate_e37a_fixture.py"""
    return FIXTURES / "e37a_p3.mst"


@pytest.fixture
def e37a_table(e37a_table_path):
    return load_table(e37a_table_path, prec=PREC)
