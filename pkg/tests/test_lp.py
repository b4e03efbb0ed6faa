import logging

import numpy as np
import pytest

from threshold_lab.core.exceptions import GroundSetTooLarge, LPNumericalFailure
from threshold_lab.core.family import enumerate_monotone_families, triangle_free_family
from threshold_lab.core.lp import CoverLP, covered_by, direction_weights, lexicographic_rank, lp_min_cover
from threshold_lab.model import Direction


def test_covered_by():
    assert covered_by(0b011, 0b001, Direction.DOWN)
    assert not covered_by(0b001, 0b011, Direction.DOWN)
    assert covered_by(0b001, 0b011, Direction.UP)


def test_direction_weights():
    down = direction_weights(2, 0.25, Direction.DOWN)
    assert down == {0b00: 0.5625, 0b01: 0.75, 0b10: 0.75, 0b11: 1.0}
    up = direction_weights(2, 0.25, Direction.UP)
    assert up[0b00] == 1.0 and up[0b11] == 0.0625


def test_lexicographic_rank_follows_bitstrings():
    assert sorted(range(4), key=lambda b: lexicographic_rank(b, 2)) == [0b00, 0b10, 0b01, 0b11]


def test_triangle_free_3_fractional_optimum(triangle_free_3):
    weights = direction_weights(3, 0.9, Direction.DOWN)
    value, g = lp_min_cover(triangle_free_3, weights)
    assert value == pytest.approx(0.3, abs=1e-9)
    for member in triangle_free_3.member_list:
        assert g.coverage(member, Direction.DOWN) >= 1 - 1e-9


@pytest.mark.parametrize("p", [0.2, 0.5, 0.85])
def test_rational_simplex_agrees_with_highs(p):
    for direction in (Direction.DOWN, Direction.UP):
        for family in enumerate_monotone_families(3, direction):
            weights = direction_weights(3, p, direction)
            highs, _ = lp_min_cover(family, weights, solver="highs", canonical=False)
            exact, g = lp_min_cover(family, weights, solver="rational")
            assert highs == pytest.approx(exact, abs=1e-9)
            for member in family.member_list:
                assert g.coverage(member, direction) >= 1 - 1e-9


def test_canonical_solution_keeps_the_optimum(two_singletons_down):
    weights = direction_weights(2, 0.5, Direction.DOWN)
    plain, _ = lp_min_cover(two_singletons_down, weights, canonical=False)
    canonical, _ = lp_min_cover(two_singletons_down, weights, canonical=True)
    assert canonical == pytest.approx(plain, abs=1e-9)


def test_validation_rejects_uncovering_solution(two_singletons_down):
    lp = CoverLP(two_singletons_down)
    weights = direction_weights(2, 0.5, Direction.DOWN)
    with pytest.raises(LPNumericalFailure):
        lp.validate(weights, 0.0, {t: 0.0 for t in lp.candidates})


def test_negative_weights_are_rejected(two_singletons_down):
    weights = {t: -1.0 for t in range(4)}
    with pytest.raises(ValueError):
        lp_min_cover(two_singletons_down, weights)


def test_lp_refuses_large_ground_sets():
    with pytest.raises(GroundSetTooLarge):
        CoverLP(triangle_free_family(4))


def test_rational_fallback_reports_skipped_tie_break(two_singletons_down, caplog):
    weights = direction_weights(2, 0.5, Direction.DOWN)
    with caplog.at_level(logging.WARNING, logger="threshold_lab.core.lp"):
        value, _ = lp_min_cover(two_singletons_down, weights, solver="rational", canonical=True)
    assert value == pytest.approx(1.0)
    assert any("tie-break" in r.getMessage() for r in caplog.records)
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="threshold_lab.core.lp"):
        lp_min_cover(two_singletons_down, weights, solver="rational", canonical=False)
    assert not caplog.records


def test_optimum_is_monotone_under_weight_decrease():
    rng = np.random.default_rng(2024)
    families = [f for f in enumerate_monotone_families(4) if not f.is_trivial]
    for index in rng.choice(len(families), size=12, replace=False):
        family = families[index]
        lp = CoverLP(family)
        weights = {t: float(w) for t, w in enumerate(rng.random(16))}
        lowered = {t: w * float(rng.random()) for t, w in weights.items()}
        high, _ = lp.solve(weights, canonical=False)
        low, _ = lp.solve(lowered, canonical=False)
        assert low <= high + 1e-9, family.bitstrings()
