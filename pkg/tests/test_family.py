import math

import pytest
from hypothesis import given, settings as hypothesis_settings
import hypothesis.strategies as st

from threshold_lab.core.exceptions import (
    GroundSetTooLarge,
    Inconclusive,
    NotMonotone,
    TrivialFamily,
)
from threshold_lab.core.family import (
    check_monotone,
    dual_family,
    enumerate_monotone_families,
    mu_p_exact,
    mu_p_monte_carlo,
    threshold_bracket,
    threshold_exact,
    threshold_monte_carlo,
    triangle_free_family,
)
from threshold_lab.model import Direction, GroundSet, MonotoneFamily, down_closure, minimal_elements

DOWN_3 = enumerate_monotone_families(3, Direction.DOWN)
UP_3 = enumerate_monotone_families(3, Direction.UP)


def test_mu_of_two_singletons(two_singletons_down):
    assert mu_p_exact(two_singletons_down, 0.5) == pytest.approx(0.75)
    assert mu_p_exact(two_singletons_down, 0.0) == 1.0
    assert mu_p_exact(two_singletons_down, 1.0) == 0.0


def test_mu_rejects_bad_probability(two_singletons_down):
    with pytest.raises(ValueError):
        mu_p_exact(two_singletons_down, 1.5)
    with pytest.raises(ValueError):
        mu_p_exact(two_singletons_down, float("nan"))


def test_mu_refuses_large_ground_sets():
    with pytest.raises(GroundSetTooLarge):
        mu_p_exact(triangle_free_family(8), 0.1)


@pytest.mark.parametrize(
    "fixture, expected",
    [
        ("two_singletons_down", math.sqrt(0.5)),
        ("triangle_free_3", 0.5 ** (1 / 3)),
        ("two_singletons_up", 1 - math.sqrt(0.5)),
    ],
)
def test_threshold_worked_values(request, fixture, expected):
    family = request.getfixturevalue(fixture)
    assert threshold_exact(family) == pytest.approx(expected, abs=1e-5)


def test_threshold_bracket_is_tight(triangle_free_3):
    estimate = threshold_bracket(triangle_free_3, tol=1e-8)
    assert estimate.hi.value - estimate.lo.value <= 1e-8
    assert estimate.lo.value <= 0.5 ** (1 / 3) <= estimate.hi.value
    assert estimate.provenance == "exact"


def test_trivial_families_have_no_threshold():
    ground = GroundSet(2)
    with pytest.raises(TrivialFamily):
        threshold_exact(MonotoneFamily.from_members(ground, Direction.DOWN, []))
    with pytest.raises(TrivialFamily):
        threshold_exact(MonotoneFamily.from_members(ground, Direction.DOWN, range(4)))


def test_dual_threshold_is_reflected(two_singletons_down):
    dual = dual_family(two_singletons_down)
    assert dual.direction is Direction.UP
    assert threshold_exact(dual) == pytest.approx(1 - math.sqrt(0.5), abs=1e-5)


def test_monte_carlo_measure_covers_exact_value(triangle_free_3):
    estimate = mu_p_monte_carlo(triangle_free_3, 0.5, trials=4000, seed=11)
    assert abs(estimate.estimate - 0.875) <= 2 * estimate.half_width
    assert estimate.trials == 4000


def test_monte_carlo_measure_is_exact_at_endpoints(triangle_free_3):
    assert mu_p_monte_carlo(triangle_free_3, 0.0, trials=10, seed=1).estimate == 1.0
    assert mu_p_monte_carlo(triangle_free_3, 1.0, trials=10, seed=1).half_width == 0.0


def test_monte_carlo_measure_ignores_thread_count():
    family = triangle_free_family(6)
    one = mu_p_monte_carlo(family, 0.3, trials=500, seed=5, threads=1)
    four = mu_p_monte_carlo(family, 0.3, trials=500, seed=5, threads=4)
    assert one == four


def test_monte_carlo_threshold(two_singletons_down):
    estimate = threshold_monte_carlo(two_singletons_down, trials_per_level=2000, seed=3, tol=0.02)
    assert estimate.provenance == "monte-carlo"
    assert estimate.value == pytest.approx(math.sqrt(0.5), abs=0.05)
    assert estimate.levels >= 1


def test_monte_carlo_threshold_needs_sign_change():
    empty = MonotoneFamily.from_members(GroundSet(3), Direction.DOWN, [])
    with pytest.raises(Inconclusive):
        threshold_monte_carlo(empty, trials_per_level=100, seed=0)


def test_check_monotone_finds_violation():
    ground = GroundSet(2)
    broken = MonotoneFamily.from_members(ground, Direction.DOWN, [0b00, 0b11])
    with pytest.raises(NotMonotone):
        check_monotone(broken)


def test_check_monotone_samples_large_families():
    check_monotone(triangle_free_family(7), seed=2, pairs=500)


def test_enumeration_counts():
    assert len(DOWN_3) == 20
    assert len(UP_3) == 20
    assert len(enumerate_monotone_families(4)) == 168
    assert sum(f.is_trivial for f in DOWN_3) == 2


def test_enumerated_families_are_monotone():
    for family in DOWN_3 + UP_3:
        check_monotone(family)


def test_closure_and_minimal_elements():
    ground = GroundSet(3)
    family = down_closure(ground, [0b011, 0b100])
    assert set(family.member_list) == {0b000, 0b001, 0b010, 0b011, 0b100}
    assert minimal_elements(family) == [0b011, 0b100]


def test_triangle_free_3_is_all_but_the_triangle(triangle_free_3):
    assert triangle_free_3.size_counts == (1, 3, 3, 0)


@given(
    family=st.sampled_from([f for f in DOWN_3 + UP_3 if not f.is_trivial]),
    p=st.floats(0.0, 1.0),
    q=st.floats(0.0, 1.0),
)
@hypothesis_settings(max_examples=200, deadline=None)
def test_measure_is_monotone_in_p(family, p, q):
    lo, hi = min(p, q), max(p, q)
    if family.direction is Direction.UP:
        assert mu_p_exact(family, lo) <= mu_p_exact(family, hi) + 1e-12
    else:
        assert mu_p_exact(family, lo) >= mu_p_exact(family, hi) - 1e-12


@pytest.mark.slow
def test_triangle_free_threshold_scales_like_one_over_n():
    scaled = []
    for n in (8, 16, 32, 64):
        estimate = threshold_monte_carlo(
            triangle_free_family(n), trials_per_level=2000, seed=n, tol=0.05 / n
        )
        scaled.append(n * estimate.value)
    for a, b in zip(scaled, scaled[1:]):
        assert max(a, b) / min(a, b) <= 1.6


def test_monte_carlo_measure_keeps_one_record_per_trial(triangle_free_3):
    estimate = mu_p_monte_carlo(triangle_free_3, 0.5, trials=300, seed=4)
    assert [r["trial"] for r in estimate.records] == list(range(300))
    assert sum(r["member"] for r in estimate.records) / 300 == pytest.approx(estimate.estimate)
    for record in estimate.records:
        bits = triangle_free_3.ground.from_bitstring(record["sample"]).bits
        assert record["member"] == int(triangle_free_3.member(bits))
    assert "records" not in estimate.model_dump()


def test_monte_carlo_threshold_keeps_one_record_per_level(two_singletons_down):
    estimate = threshold_monte_carlo(two_singletons_down, trials_per_level=500, seed=9, tol=0.05)
    assert [r["trial"] for r in estimate.records] == list(range(estimate.levels))
    assert estimate.records[0]["p"] == 0.5
    for record in estimate.records:
        assert record["hits"] == pytest.approx(record["estimate"] * record["trials"])
    assert estimate.threshold.half_width == estimate.records[-1]["half_width"]


DOWN_4 = enumerate_monotone_families(4, Direction.DOWN)
UP_4 = enumerate_monotone_families(4, Direction.UP)
GRID = [i / 20 for i in range(21)]


@pytest.mark.parametrize("direction", [Direction.DOWN, Direction.UP])
def test_measure_is_monotone_in_p_for_every_family_of_four_elements(direction):
    families = DOWN_4 if direction is Direction.DOWN else UP_4
    for family in families:
        values = [mu_p_exact(family, p) for p in GRID]
        if direction is Direction.DOWN:
            values = values[::-1]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:])), family.bitstrings()


@pytest.mark.slow
def test_monte_carlo_half_width_covers_exact_value_in_repeated_runs(triangle_free_3):
    exact = mu_p_exact(triangle_free_3, 0.5)
    covered = 0
    for seed in range(100):
        estimate = mu_p_monte_carlo(triangle_free_3, 0.5, trials=1000, seed=seed)
        covered += abs(estimate.estimate - exact) <= 4 * estimate.half_width
    assert covered >= 99
