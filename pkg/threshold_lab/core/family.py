"""
Product measure and thresholds of monotone families.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import (
    GroundSetTooLarge,
    Inconclusive,
    NotMonotone,
    TrivialFamily,
)
from threshold_lab.core.graphs import is_triangle_free
from threshold_lab.core.seeding import SeedLike, as_generator, run_trials, substream_seed
from threshold_lab.core.stats import compensated_sum, half_width, proportion
from threshold_lab.model.family import Direction, MonotoneFamily
from threshold_lab.model.graph import EdgeSet, pair_count
from threshold_lab.model.ground_set import EXACT_LIMIT, GroundSet, iter_bits
from threshold_lab.schemas.reports import MonteCarloEstimate, Quantity, ThresholdEstimate

logger = logging.getLogger(__name__)

# Exhaustive monotonicity checks up to this ground-set size, sampling beyond
MONOTONE_EXHAUSTIVE_LIMIT = 16
# All monotone families are listed only for tiny ground sets
ENUMERATION_LIMIT = 4


def check_probability(p: float) -> float:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"p = {p} is not a probability")
    return float(p)


def mu_p_exact(family: MonotoneFamily, p: float) -> float:
    """
    Measure of ``family`` under the p-biased product measure.

    Parameters:
    - family: monotone family with N <= 24.
    - p: probability.
    Returns:
    - sum over members S of p^|S| (1-p)^(N-|S|), grouped by |S|.
    """
    p = check_probability(p)
    size = family.ground.size
    if size > EXACT_LIMIT:
        raise GroundSetTooLarge(size, EXACT_LIMIT)
    counts = family.size_counts
    if p == 0.0:
        return float(counts[0])
    if p == 1.0:
        return float(counts[size])
    log_p, log_q = math.log(p), math.log1p(-p)
    total = compensated_sum(
        count * math.exp(k * log_p + (size - k) * log_q) for k, count in enumerate(counts) if count
    )
    return min(max(total, 0.0), 1.0)


def _require_nontrivial(family: MonotoneFamily) -> None:
    name = family.label or "family"
    if family.is_empty:
        raise TrivialFamily(f"{name} is empty")
    if family.is_everything:
        raise TrivialFamily(f"{name} is all of 2^X")


def threshold_bracket(family: MonotoneFamily, tol: Optional[float] = None) -> ThresholdEstimate:
    """
    Bisection for mu_p(F) = 1/2, using that mu_p is increasing in p for
    up-sets and decreasing for down-sets.
    """
    tol = settings.EXACT_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    _require_nontrivial(family)
    if family.ground.size > EXACT_LIMIT:
        raise GroundSetTooLarge(family.ground.size, EXACT_LIMIT)
    up = family.direction is Direction.UP
    lo, hi = 0.0, 1.0
    levels = 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        below = mu_p_exact(family, mid) < 0.5 if up else mu_p_exact(family, mid) > 0.5
        if below:
            lo = mid
        else:
            hi = mid
        levels += 1
    return ThresholdEstimate(
        threshold=Quantity.exact((lo + hi) / 2),
        lo=Quantity.exact(lo),
        hi=Quantity.exact(hi),
        levels=levels,
    )


def threshold_exact(family: MonotoneFamily, tol: Optional[float] = None) -> float:
    return threshold_bracket(family, tol).threshold.value


def sample_mask(size: int, p: float, rng: np.random.Generator) -> int:
    """One p-biased subset of a ground set of ``size`` elements; bit i is element i."""
    draws = rng.random(size) < p
    return int.from_bytes(np.packbits(draws, bitorder="little").tobytes(), "little")


def mu_p_monte_carlo(
    family: MonotoneFamily,
    p: float,
    trials: int,
    seed: int,
    threads: Optional[int] = None,
) -> MonteCarloEstimate:
    """
    Empirical membership frequency of ``trials`` p-biased masks with its
    95% half-width. Trial i draws from its own substream of ``seed``; its
    record holds the sample as a bit-string and whether it is a member.
    """
    p = check_probability(p)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if p in (0.0, 1.0):
        # the sample is surely the empty set or X
        mask = 0 if p == 0.0 else family.ground.full
        inside = int(family.member(mask))
        sample = family.ground.to_bitstring(mask)
        records = [{"trial": i, "sample": sample, "member": inside} for i in range(trials)]
        return MonteCarloEstimate(
            estimate=float(inside), half_width=0.0, standard_error=0.0, trials=trials, records=records
        )
    size = family.ground.size
    member = family.member
    to_bitstring = family.ground.to_bitstring

    def trial(index: int, rng: np.random.Generator) -> dict:
        mask = sample_mask(size, p, rng)
        return {"trial": index, "sample": to_bitstring(mask), "member": int(member(mask))}

    records = run_trials(trial, trials, seed, threads=threads)
    estimate, error = proportion(sum(r["member"] for r in records), trials)
    return MonteCarloEstimate(
        estimate=estimate, half_width=half_width(error), standard_error=error, trials=trials, records=records
    )


def threshold_monte_carlo(
    family: MonotoneFamily,
    trials_per_level: int,
    seed: int,
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> ThresholdEstimate:
    """
    Bisection on Monte Carlo estimates of mu_p. Refinement stops when the
    bracket is narrower than ``tol`` or when the estimate's interval at the
    midpoint straddles 1/2. Level k is sampled from substream k of ``seed``.
    """
    tol = settings.MC_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    up = family.direction is Direction.UP
    at_zero = bool(family.member(0))
    at_one = bool(family.member(family.ground.full))
    # mu_0 and mu_1 are exact: the samples are surely the empty set and X
    if (at_zero, at_one) != ((False, True) if up else (True, False)):
        raise Inconclusive(
            f"no sign change of mu_p - 1/2 on [0, 1] (member(empty)={at_zero}, member(X)={at_one})"
        )
    lo, hi = 0.0, 1.0
    levels = 0
    last_half_width = 0.0
    straddled = False
    records = []
    while hi - lo > tol:
        mid = (lo + hi) / 2
        estimate = mu_p_monte_carlo(
            family, mid, trials_per_level, substream_seed(seed, levels), threads=threads
        )
        records.append(
            {
                "trial": levels,
                "p": mid,
                "trials": trials_per_level,
                "hits": sum(r["member"] for r in estimate.records),
                "estimate": estimate.estimate,
                "half_width": estimate.half_width,
            }
        )
        levels += 1
        last_half_width = estimate.half_width
        logger.debug(f"level {levels}: mu_{mid:.6f} ~ {estimate.estimate:.4f} +- {estimate.half_width:.4f}")
        if abs(estimate.estimate - 0.5) <= estimate.half_width:
            straddled = True
            break
        below = estimate.estimate < 0.5 if up else estimate.estimate > 0.5
        if below:
            lo = mid
        else:
            hi = mid
    return ThresholdEstimate(
        threshold=Quantity.monte_carlo((lo + hi) / 2, last_half_width),
        lo=Quantity.exact(lo),
        hi=Quantity.exact(hi),
        levels=levels,
        stopped_on_interval=straddled,
        records=records,
    )


def check_monotone(family: MonotoneFamily, seed: SeedLike = 0, pairs: Optional[int] = None) -> None:
    """
    Raises NotMonotone with a witness pair if the declared direction is
    violated. Exhaustive for N <= 16, otherwise over sampled comparable pairs.
    """
    size = family.ground.size
    member = family.member
    up = family.direction is Direction.UP

    def violation(smaller: int, larger: int) -> None:
        raise NotMonotone(
            f"{family.ground.to_bitstring(smaller)} ⊆ {family.ground.to_bitstring(larger)} "
            f"violates the declared direction {family.direction.value}"
        )

    if size <= MONOTONE_EXHAUSTIVE_LIMIT:
        members = set(family.member_list)
        for bits in members:
            if up:
                for i in range(size):
                    if not bits >> i & 1 and (bits | 1 << i) not in members:
                        violation(bits, bits | 1 << i)
            else:
                for i in iter_bits(bits):
                    if bits ^ 1 << i not in members:
                        violation(bits ^ 1 << i, bits)
        return
    pairs = settings.MONOTONE_SAMPLE_PAIRS if pairs is None else pairs
    rng = as_generator(seed)
    for _ in range(pairs):
        smaller = sample_mask(size, 0.5, rng)
        larger = smaller | sample_mask(size, 0.5, rng)
        if up and member(smaller) and not member(larger):
            violation(smaller, larger)
        if not up and member(larger) and not member(smaller):
            violation(smaller, larger)


def enumerate_monotone_families(size: int, direction: Direction = Direction.DOWN) -> List[MonotoneFamily]:
    """
    Every down-set (or up-set) of 2^X for |X| = size <= 4, the empty family
    and 2^X included.
    """
    if size > ENUMERATION_LIMIT:
        raise GroundSetTooLarge(size, ENUMERATION_LIMIT)
    ground = GroundSet(size)
    direction = Direction(direction)
    order = sorted(range(1 << size), key=lambda bits: (bits.bit_count(), bits))
    found: List[frozenset] = []

    def extend(i: int, chosen: set) -> None:
        if i == len(order):
            found.append(frozenset(chosen))
            return
        bits = order[i]
        extend(i + 1, chosen)
        # a set may join once all its immediate subsets are in
        if all(bits ^ 1 << j in chosen for j in iter_bits(bits)):
            chosen.add(bits)
            extend(i + 1, chosen)
            chosen.discard(bits)

    extend(0, set())
    full = ground.full
    families = []
    for index, members in enumerate(sorted(found, key=lambda s: (len(s), sorted(s)))):
        if direction is Direction.UP:
            members = frozenset(full ^ bits for bits in members)
        families.append(
            MonotoneFamily.from_members(ground, direction, members, label=f"{direction.value}-{size}-{index}")
        )
    return families


def dual_family(family: MonotoneFamily) -> MonotoneFamily:
    """
    {S : X minus S not in F}, of the opposite direction. For nontrivial F its
    threshold is 1 - p_c(F).
    """
    full = family.ground.full
    member = family.member
    label = f"dual({family.label})" if family.label else "dual"
    if family.enumeration is not None or family.ground.size <= EXACT_LIMIT:
        inside = set(family.member_list)
        return MonotoneFamily.from_members(
            family.ground,
            family.direction.opposite,
            (bits for bits in range(full + 1) if full ^ bits not in inside),
            label,
        )
    return MonotoneFamily(
        family.ground, family.direction.opposite, lambda bits: not member(full ^ bits), None, label
    )


def triangle_free_family(n: int) -> MonotoneFamily:
    """The down-set of triangle-free graphs on [n], over the edges of K_n."""
    if n < 3:
        raise ValueError("triangle-free graphs form a nontrivial family only for n >= 3")
    ground = GroundSet(pair_count(n), label=f"E(K_{n})")

    def member(bits: int) -> bool:
        return is_triangle_free(EdgeSet(n, bits).to_graph())

    return MonotoneFamily(ground, Direction.DOWN, member, None, f"triangle-free({n})")

