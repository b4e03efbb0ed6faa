"""
Certificates of p-smallness and the expectation-thresholds q and q_f.

A certificate G covers a down-set F if every member lies inside some
T in G, and an up-set if every member contains some T in G. Its cost at p
is sum_T (1-p)^(N-|T|) for down-sets and sum_T p^|T| for up-sets; F is
p-small when some covering certificate costs at most 1/2.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import (
    GroundSetTooLarge,
    MonotonicityViolation,
    TrivialFamily,
)
from threshold_lab.core.family import check_probability, sample_mask, threshold_exact
from threshold_lab.core.lp import CoverLP, covered_by, direction_weights
from threshold_lab.core.seeding import SeedLike, as_generator
from threshold_lab.core.stats import compensated_sum
from threshold_lab.model.certificate import Certificate, FractionalCertificate
from threshold_lab.model.family import Direction, MonotoneFamily
from threshold_lab.model.ground_set import EXACT_LIMIT, iter_bits
from threshold_lab.schemas.graph import CertificateSchema, FractionalCertificateSchema
from threshold_lab.schemas.reports import CertVerdict, ExpectationThreshold, Quantity, SandwichReport

logger = logging.getLogger(__name__)

# Exact cover search over the 2^N candidate sets
COVER_SEARCH_LIMIT = 4
SAMPLED_COVER_TRIALS = 10_000


def set_weight(bits: int, size: int, p: float, direction: Direction) -> float:
    """Weight of one certificate member, evaluated in log-space."""
    exponent = bits.bit_count() if direction is Direction.UP else size - bits.bit_count()
    base = p if direction is Direction.UP else 1.0 - p
    if exponent == 0:
        return 1.0
    if base == 0.0:
        return 0.0
    return math.exp(exponent * math.log(base))


def cert_cost(cert: Certificate, p: float, direction: Direction) -> float:
    p = check_probability(p)
    direction = Direction(direction)
    size = cert.ground.size
    return compensated_sum(set_weight(t, size, p, direction) for t in cert.members)


def fractional_cost(cert: FractionalCertificate, p: float, direction: Direction) -> float:
    p = check_probability(p)
    direction = Direction(direction)
    size = cert.ground.size
    return compensated_sum(w * set_weight(t, size, p, direction) for t, w in cert.weights)


def _is_covered(member: int, cert: Certificate, direction: Direction) -> bool:
    return any(covered_by(t, member, direction) for t in cert.members)


def covers(
    cert: Certificate,
    family: MonotoneFamily,
    trials: int = SAMPLED_COVER_TRIALS,
    seed: SeedLike = 0,
) -> bool:
    """
    Exhaustive for N <= 24. Beyond that, searches ``trials`` random masks
    (each at a random density) for an uncovered member; True then only
    means none was found.
    """
    direction = family.direction
    if family.ground.size <= EXACT_LIMIT:
        return all(_is_covered(s, cert, direction) for s in family.member_list)
    rng = as_generator(seed)
    for _ in range(trials):
        bits = sample_mask(family.ground.size, float(rng.random()), rng)
        if family.member(bits) and not _is_covered(bits, cert, direction):
            return False
    return True


def evaluate_certificate(cert: Certificate, family: MonotoneFamily, p: float) -> CertVerdict:
    cost = cert_cost(cert, p, family.direction)
    covering = covers(cert, family)
    return CertVerdict(
        cost=Quantity.exact(cost),
        covers=covering,
        p_small=covering and cost <= 0.5,
        sampled=family.ground.size > EXACT_LIMIT,
    )


def min_cover(family: MonotoneFamily, p: float) -> Tuple[float, Certificate]:
    """
    Cheapest covering certificate at p, by branch and bound.

    Candidates are all 2^N subsets. A candidate is dropped when another one
    covers a superset of its members at no greater cost. Branching picks the
    uncovered member with the fewest remaining candidates.
    """
    p = check_probability(p)
    size = family.ground.size
    if size > COVER_SEARCH_LIMIT:
        raise GroundSetTooLarge(size, COVER_SEARCH_LIMIT)
    direction = family.direction
    members = list(family.member_list)
    if not members:
        return 0.0, Certificate(family.ground)

    candidates: List[Tuple[float, int, int]] = []
    for t in range(1 << size):
        reach = 0
        for index, s in enumerate(members):
            if covered_by(t, s, direction):
                reach |= 1 << index
        if reach:
            candidates.append((set_weight(t, size, p, direction), t, reach))

    def dominated(entry) -> bool:
        cost, t, reach = entry
        for other_cost, other, other_reach in candidates:
            if other == t or reach & ~other_reach:
                continue
            if other_cost < cost or (other_cost == cost and (other_reach != reach or other < t)):
                return True
        return False

    kept = sorted((c for c in candidates if not dominated(c)), key=lambda c: (c[0], c[1]))
    by_member: Dict[int, List[Tuple[float, int, int]]] = {
        index: [c for c in kept if c[2] >> index & 1] for index in range(len(members))
    }
    everything = (1 << len(members)) - 1
    best_cost = math.inf
    best: List[int] = []

    def search(covered: int, cost: float, chosen: List[int]) -> None:
        nonlocal best_cost, best
        if covered == everything:
            if cost < best_cost:
                best_cost, best = cost, list(chosen)
            return
        uncovered = everything & ~covered
        pivot = min(iter_bits(uncovered), key=lambda index: len(by_member[index]))
        for weight, t, reach in by_member[pivot]:
            if cost + weight >= best_cost:
                break
            chosen.append(t)
            search(covered | reach, cost + weight, chosen)
            chosen.pop()

    search(0, 0.0, [])
    return best_cost, Certificate(family.ground, tuple(best))


def _bisect(
    family: MonotoneFamily,
    optimum: Callable[[float], Tuple[float, object]],
    tol: float,
) -> Tuple[float, float, Tuple[float, object], Tuple[float, object]]:
    """
    Bisection for the boundary of {p : optimum(p) <= 1/2}. Down-sets become
    small as p grows, up-sets as p shrinks. Returns the final bracket with
    the optimum at both ends, the p-small end first.
    """
    if family.is_empty or family.is_everything:
        raise TrivialFamily(f"{family.label or 'family'} is trivial")
    down = family.direction is Direction.DOWN
    lo, hi = 0.0, 1.0
    at_lo, at_hi = optimum(lo), optimum(hi)
    small_lo, small_hi = at_lo[0] <= 0.5, at_hi[0] <= 0.5
    if (small_lo, small_hi) != ((False, True) if down else (True, False)):
        raise MonotonicityViolation(
            f"p-smallness at p = 0 / 1 is {small_lo} / {small_hi} for a {family.direction.value}-set"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2
        at_mid = optimum(mid)
        if (at_mid[0] <= 0.5) == down:
            hi, at_hi = mid, at_mid
        else:
            lo, at_lo = mid, at_mid
    # the optimal cost moves monotonically in p
    if (down and at_lo[0] < at_hi[0]) or (not down and at_lo[0] > at_hi[0]):
        raise MonotonicityViolation(
            f"optimal cost {at_lo[0]} at p = {lo} vs {at_hi[0]} at p = {hi}"
        )
    small, large = (at_hi, at_lo) if down else (at_lo, at_hi)
    return lo, hi, small, large


def q_exact(family: MonotoneFamily, tol: Optional[float] = None) -> ExpectationThreshold:
    """
    q(F): the smallest p at which a down-set is p-small, the largest for an
    up-set. N <= 4.
    """
    tol = settings.EXACT_TOL if tol is None else tol
    if family.ground.size > COVER_SEARCH_LIMIT:
        raise GroundSetTooLarge(family.ground.size, COVER_SEARCH_LIMIT)
    lo, hi, small, large = _bisect(family, lambda p: min_cover(family, p), tol)
    down = family.direction is Direction.DOWN
    cert: Certificate = small[1]
    return ExpectationThreshold(
        threshold=Quantity.exact((lo + hi) / 2),
        lo=Quantity.exact(lo),
        hi=Quantity.exact(hi),
        cost_at_lo=Quantity.exact((large if down else small)[0]),
        cost_at_hi=Quantity.exact((small if down else large)[0]),
        certificate=CertificateSchema(ground_size=family.ground.size, members=cert.bitstrings()),
    )


def qf_exact(family: MonotoneFamily, tol: Optional[float] = None, solver: Optional[str] = None) -> ExpectationThreshold:
    """
    q_f(F): like q(F) with fractional certificates; one LP per bisection step. N <= 5.
    """
    tol = settings.EXACT_TOL if tol is None else tol
    size = family.ground.size
    lp = CoverLP(family)

    def optimum(p: float):
        return lp.solve(direction_weights(size, p, family.direction), solver=solver)

    lo, hi, small, large = _bisect(family, optimum, tol)
    down = family.direction is Direction.DOWN
    cert: FractionalCertificate = small[1]
    return ExpectationThreshold(
        threshold=Quantity.exact((lo + hi) / 2),
        lo=Quantity.exact(lo),
        hi=Quantity.exact(hi),
        cost_at_lo=Quantity.exact((large if down else small)[0]),
        cost_at_hi=Quantity.exact((small if down else large)[0]),
        fractional_certificate=FractionalCertificateSchema(
            ground_size=size, weights=cert.bitstring_weights()
        ),
    )


def verify_sandwich(family: MonotoneFamily, tol: Optional[float] = None) -> SandwichReport:
    """
    p_c <= q_f <= q for down-sets and q <= q_f <= p_c for up-sets, each
    within ``tol``.
    """
    tol = settings.SANDWICH_TOL if tol is None else tol
    if family.ground.size > COVER_SEARCH_LIMIT:
        raise GroundSetTooLarge(family.ground.size, COVER_SEARCH_LIMIT)
    p_c = threshold_exact(family)
    q_f = qf_exact(family).value
    q = q_exact(family).value
    if family.direction is Direction.DOWN:
        passed = p_c <= q_f + tol and q_f <= q + tol
    else:
        passed = q <= q_f + tol and q_f <= p_c + tol
    if not passed:
        logger.error(f"Sandwich chain broken for {family.label}: p_c={p_c}, q_f={q_f}, q={q}")
    return SandwichReport(
        direction=family.direction.value,
        p_c=Quantity.exact(p_c),
        q_f=Quantity.exact(q_f),
        q=Quantity.exact(q),
        tolerance=Quantity.exact(tol),
        passed=passed,
    )


def certificate_from_schema(schema: CertificateSchema, ground) -> Certificate:
    return Certificate(ground, tuple(ground.from_bitstring(b).bits for b in schema.members))


def fractional_from_schema(schema: FractionalCertificateSchema, ground) -> FractionalCertificate:
    return FractionalCertificate(
        ground, tuple((ground.from_bitstring(b).bits, w) for b, w in schema.weights.items())
    )
