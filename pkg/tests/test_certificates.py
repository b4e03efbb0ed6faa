import math

import pytest
from hypothesis import given, settings as hypothesis_settings
import hypothesis.strategies as st

from threshold_lab.core.certificates import (
    cert_cost,
    certificate_from_schema,
    covers,
    evaluate_certificate,
    fractional_cost,
    min_cover,
    q_exact,
    qf_exact,
    verify_sandwich,
)
from threshold_lab.core.exceptions import GroundSetTooLarge, TrivialFamily
from threshold_lab.core.family import enumerate_monotone_families, triangle_free_family
from threshold_lab.model import Certificate, Direction, FractionalCertificate, GroundSet, MonotoneFamily
from threshold_lab.schemas.graph import CertificateSchema

GROUND_2 = GroundSet(2)


def test_cost_of_singletons():
    cert = Certificate.of(GROUND_2, [0b01, 0b10])
    assert cert_cost(cert, 0.8, Direction.DOWN) == pytest.approx(0.4)
    assert cert_cost(cert, 0.2, Direction.UP) == pytest.approx(0.4)


def test_cost_of_empty_certificate_is_zero():
    assert cert_cost(Certificate(GROUND_2), 0.3, Direction.DOWN) == 0.0


def test_fractional_cost_matches_integral_cost():
    cert = Certificate.of(GROUND_2, [0b01, 0b11])
    fractional = FractionalCertificate.from_certificate(cert)
    assert fractional_cost(fractional, 0.6, Direction.DOWN) == pytest.approx(cert_cost(cert, 0.6, Direction.DOWN))


def test_covers(two_singletons_down):
    assert covers(Certificate.of(GROUND_2, [0b01, 0b10]), two_singletons_down)
    assert not covers(Certificate.of(GROUND_2, [0b01]), two_singletons_down)
    assert covers(Certificate.of(GROUND_2, [0b11]), two_singletons_down)


def test_evaluate_certificate(two_singletons_down):
    cert = Certificate.of(GROUND_2, [0b01, 0b10])
    small = evaluate_certificate(cert, two_singletons_down, 0.8)
    assert small.covers and small.p_small
    large = evaluate_certificate(cert, two_singletons_down, 0.7)
    assert large.covers and not large.p_small
    assert large.cost.value == pytest.approx(0.6)
    assert not large.sampled


def test_min_cover_picks_singletons(two_singletons_down):
    cost, cert = min_cover(two_singletons_down, 0.8)
    assert cost == pytest.approx(0.4)
    assert cert.bitstrings() == ["10", "01"]


def test_min_cover_prefers_whole_set_when_cheaper(two_singletons_down):
    # at p = 0.3 the singletons cost 1.4 and X costs 1
    cost, cert = min_cover(two_singletons_down, 0.3)
    assert cost == pytest.approx(1.0)
    assert cert.members == (0b11,)


def test_min_cover_refuses_large_ground_sets():
    with pytest.raises(GroundSetTooLarge):
        min_cover(triangle_free_family(4), 0.5)


@pytest.mark.parametrize(
    "fixture, q",
    [("two_singletons_down", 0.75), ("triangle_free_3", 5 / 6), ("two_singletons_up", 0.25)],
)
def test_expectation_threshold_worked_values(request, fixture, q):
    family = request.getfixturevalue(fixture)
    assert q_exact(family).value == pytest.approx(q, abs=1e-4)
    assert qf_exact(family).value == pytest.approx(q, abs=1e-4)


def test_expectation_threshold_certificate(triangle_free_3):
    result = q_exact(triangle_free_3)
    assert result.lo.value <= 5 / 6 <= result.hi.value
    assert result.threshold.provenance == "exact"
    assert sorted(result.certificate.members) == ["011", "101", "110"]
    assert result.cost_at_hi.value <= 0.5 < result.cost_at_lo.value


def test_fractional_certificate_covers_every_member(two_singletons_up):
    result = qf_exact(two_singletons_up)
    weights = result.fractional_certificate.weights
    ground = GroundSet(2)
    fractional = FractionalCertificate(ground, tuple((ground.from_bitstring(b).bits, w) for b, w in weights.items()))
    for member in two_singletons_up.member_list:
        assert fractional.coverage(member, Direction.UP) >= 1 - 1e-9


def test_certificate_schema_round_trip(two_singletons_down):
    schema = CertificateSchema(ground_size=2, members=["10", "01"])
    cert = certificate_from_schema(schema, GROUND_2)
    assert cert.members == (0b01, 0b10)


def test_trivial_family_has_no_expectation_threshold():
    with pytest.raises(TrivialFamily):
        q_exact(MonotoneFamily.from_members(GROUND_2, Direction.DOWN, []))


def test_sandwich_worked_examples(two_singletons_down, triangle_free_3, two_singletons_up):
    report = verify_sandwich(two_singletons_down)
    assert report.passed
    assert (report.p_c.value, report.q_f.value, report.q.value) == pytest.approx((math.sqrt(0.5), 0.75, 0.75), abs=1e-4)
    assert verify_sandwich(triangle_free_3).passed
    up = verify_sandwich(two_singletons_up)
    assert up.passed and up.direction == "up"
    assert up.q.value <= up.q_f.value + 1e-5 <= up.p_c.value + 2e-5


def test_sandwich_on_every_family_of_three_elements():
    for direction in (Direction.DOWN, Direction.UP):
        for family in enumerate_monotone_families(3, direction):
            if family.is_trivial:
                continue
            assert verify_sandwich(family).passed, family.bitstrings()


@pytest.mark.slow
def test_sandwich_on_every_family_of_four_elements():
    for direction in (Direction.DOWN, Direction.UP):
        for family in enumerate_monotone_families(4, direction):
            if family.is_trivial:
                continue
            assert verify_sandwich(family).passed, family.bitstrings()


@given(
    members=st.lists(st.integers(0, 7), min_size=1, max_size=5),
    p=st.floats(0.0, 1.0),
    q=st.floats(0.0, 1.0),
)
@hypothesis_settings(max_examples=200, deadline=None)
def test_cost_is_monotone_in_p(members, p, q):
    cert = Certificate.of(GroundSet(3), members)
    lo, hi = min(p, q), max(p, q)
    assert cert_cost(cert, lo, Direction.UP) <= cert_cost(cert, hi, Direction.UP) + 1e-12
    assert cert_cost(cert, lo, Direction.DOWN) >= cert_cost(cert, hi, Direction.DOWN) - 1e-12
