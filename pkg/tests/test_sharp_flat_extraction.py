from dataclasses import replace

import numpy as np
import pytest

from services.errors import RelationViolated
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.theta import queue_from_table
from services.sharp_flat.extraction import (
    default_completed,
    extract,
    extract_from_table,
    extract_tower,
    forward_compose,
    reconstruction_check,
)
from services.sharp_flat.tower import TowerPolynomial

PREC = 20


def plain_pair(p):
    return (
        TowerPolynomial.from_coeffs(p, [3, 1, 4, 1, 5], PREC),
        TowerPolynomial.from_coeffs(p, [2, 7, 1], PREC),
    )


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("a", [0, 1])
@pytest.mark.parametrize("completed", [True, False])
def test_unreduced_extraction_inverts_forward_map(p, a, completed):
    h = HeckeData(p, a, prec=PREC)
    upsilon = plain_pair(p)
    vector = forward_compose(upsilon, h, 3, completed=completed, reduce=False)
    pair, trace = extract_tower(vector, h, 3, completed=completed)
    assert pair.sharp == upsilon[0].to_lambda(3)
    assert pair.flat == upsilon[1].to_lambda(3)
    assert [step.level for step in trace.steps] == [3, 2, 1]
    assert all(step.remainder_zero for step in trace.steps)


def test_forward_map_lands_in_the_norm_image():
    h = HeckeData(3, 0, prec=PREC)
    theta, nu_theta = forward_compose(plain_pair(3), h, 2, completed=True)
    assert theta.level == nu_theta.level == 2
    assert nu_theta.nu_preimage().norm_nu() == nu_theta


def test_default_flavour_per_prime():
    assert default_completed(3)
    assert not default_completed(2)


def test_synthetic_table_extraction(synthetic_p3):
    q = queue_from_table(synthetic_p3, 0)
    pair, trace = extract(q, completed=False)
    assert pair.level == 3
    assert not pair.completed
    assert len(trace.steps) == 3
    assert all(step.remainder_zero for step in trace.steps)
    assert reconstruction_check(pair, q).passed
    lines = trace.render()
    assert lines[0] == "extraction p=3 ap=0 eps=1 n=3 completed=0 i=0"
    assert lines[-1].startswith("total_loss=")


def test_plain_extraction_of_consistent_table(supersingular_table):
    q = queue_from_table(supersingular_table, 0)
    pair, _ = extract(q, completed=False)
    assert reconstruction_check(pair, q).passed
    assert pair.label == "plain(p=3, a_p=0, i=0, n=3)"


def test_lower_level_extraction(supersingular_table):
    pair, trace = extract_from_table(supersingular_table, 0, n=2, completed=False)
    assert pair.level == 2
    assert len(trace.steps) == 2
    with pytest.raises(ValueError):
        extract_from_table(supersingular_table, 0, n=5)


def test_extraction_validates_the_queue(supersingular_table):
    entries = dict(supersingular_table.entries)
    entries[(3, 1)] += 1
    entries[(3, 26)] += 1
    perturbed = replace(supersingular_table, entries=entries)
    with pytest.raises(RelationViolated):
        extract_from_table(perturbed, 0, completed=False)


def test_random_round_trips():
    rng = np.random.default_rng(20240605)
    for _ in range(6):
        p = int(rng.choice([2, 3, 5]))
        h = HeckeData(p, int(rng.integers(-3, 4)), eps=int(rng.choice([1, -1])), prec=PREC)
        n = int(rng.integers(1, 4))
        completed = bool(rng.integers(0, 2))
        upsilon = tuple(TowerPolynomial.from_coeffs(p, rng.integers(-9, 10, size=6).tolist(), PREC) for _ in range(2))
        vector = forward_compose(upsilon, h, n, completed=completed, reduce=False)
        pair, _ = extract_tower(vector, h, n, completed=completed)
        assert pair.as_tuple() == tuple(z.to_lambda(n) for z in upsilon)


def hecke_grid(p):
    for a in sorted({0, 1, -1, 2, -2, p, -p}):
        for eps in (1, -1):
            yield a, eps


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_round_trip_over_every_small_hecke_datum(p, n):
    rng = np.random.default_rng(1000 * p + n)
    for a, eps in hecke_grid(p):
        h = HeckeData(p, a, eps=eps, prec=PREC)
        for completed in (True, False):
            for _ in range(3):
                upsilon = tuple(
                    TowerPolynomial.from_coeffs(p, rng.integers(-p ** 3, p ** 3, size=p ** n + 1).tolist(), PREC)
                    for _ in range(2)
                )
                vector = forward_compose(upsilon, h, n, completed=completed, reduce=False)
                pair, trace = extract_tower(vector, h, n, completed=completed)
                assert pair.as_tuple() == tuple(z.to_lambda(n) for z in upsilon), (a, eps, completed)
                assert len(trace.steps) == n


@pytest.mark.slow
def test_thousand_round_trips_at_five():
    rng = np.random.default_rng(5_000_003)
    n = 3
    for trial in range(1000):
        h = HeckeData(5, int(rng.choice([0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5])), eps=int(rng.choice([1, -1])),
                      prec=PREC)
        completed = bool(rng.integers(0, 2))
        upsilon = tuple(
            TowerPolynomial.from_coeffs(5, rng.integers(-5 ** 6, 5 ** 6, size=int(rng.integers(1, 40))).tolist(), PREC)
            for _ in range(2)
        )
        vector = forward_compose(upsilon, h, n, completed=completed, reduce=False)
        pair, _ = extract_tower(vector, h, n, completed=completed)
        assert pair.as_tuple() == tuple(z.to_lambda(n) for z in upsilon), (trial, h.a, h.eps, completed)
