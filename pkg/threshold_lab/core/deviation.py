"""
Monte Carlo checks of the large-deviation inequalities, and the hitting
experiments built on maximal triangle-free subgraphs.

Statistical assertions compare an estimate with its closed-form bound
allowing ASSERT_SIGMAS standard errors. Probability bounds that are at
least 1 are reported as vacuous and never asserted.
"""

import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import PTooLarge
from threshold_lab.core.family import check_probability, sample_mask
from threshold_lab.core.graphs import (
    count_closed,
    h_good_edges,
    maximal_triangle_free,
    two_colouring,
)
from threshold_lab.core.random_models import hat, remove_loops, sample_digraph, sample_gnp
from threshold_lab.core.seeding import run_trials
from threshold_lab.core.stats import half_width, log_binomial, mean_of_exp, proportion
from threshold_lab.model.graph import Graph
from threshold_lab.model.weighted_family import FamilyClass, WeightedFamily
from threshold_lab.schemas.reports import (
    ConditionReport,
    DeviationReport,
    FractionalHittingReport,
    HittingReport,
    Quantity,
)

logger = logging.getLogger(__name__)

# Constants of the tail bounds
GAMMA = 1 / 10
GAMMA_DIRECTED = 1 / 5
EPSILON = 1 / 20


def _probability_report(
    successes: int,
    trials: int,
    bound: float,
    seed: int,
    records: list,
    edges: int,
    extras: Optional[dict] = None,
) -> DeviationReport:
    estimate, error = proportion(successes, trials)
    vacuous = bound >= 1
    passed = vacuous or estimate <= bound + settings.ASSERT_SIGMAS * error
    if not passed:
        logger.error(f"Estimate {estimate:.5f} exceeds bound {bound:.5f} by more than {settings.ASSERT_SIGMAS} sigma")
    return DeviationReport(
        kind="probability",
        trials=trials,
        event_count=successes,
        estimate=Quantity.monte_carlo(estimate, half_width(error)),
        bound=Quantity.formula(bound),
        vacuous=vacuous,
        passed=passed,
        seed=seed,
        edges=edges,
        extras={name: Quantity.formula(v) for name, v in (extras or {}).items()},
        records=records,
    )


def _check_small_p(p: float, n: int) -> None:
    limit = 1 / (20 * math.sqrt(n))
    if p > limit * (1 + 1e-12):
        raise PTooLarge(f"p = {p} exceeds n^(-1/2)/20 = {limit}")


def moment_check(
    h: Graph, p: float, trials: int, seed: int, threads: Optional[int] = None
) -> DeviationReport:
    """
    E[exp(Z X / 5pn)] for a random vertex subset U of density p, where X
    counts the edges of H inside U and Z indicates |U| <= 5pn, against
    exp(pm/n).

    Parameters:
    - h: bipartite graph on [n] with m edges.
    - p: vertex density, 0 < p <= 1.
    Returns:
    - An expectation report; the product-form bound over either side of the
      bipartition is added under extras.
    """
    colour = two_colouring(h)
    p = check_probability(p)
    if p == 0.0:
        raise ValueError("moment_check needs p > 0")
    n, m = h.n, h.edge_count
    scale = 5 * p * n

    def trial(index: int, rng: np.random.Generator) -> dict:
        chosen = sample_mask(n, p, rng)
        size = chosen.bit_count()
        inside = h.induced_edge_count(chosen)
        z = size <= scale
        return {"trial": index, "size": size, "x": inside, "z": int(z), "log_value": z * inside / scale}

    records = run_trials(trial, trials, seed, threads=threads)
    estimate, error = mean_of_exp(np.array([r["log_value"] for r in records]))
    bound = math.exp(p * m / n)
    product_bounds = []
    for side in (0, 1):
        product_bounds.append(
            math.prod(1 - p + p * math.exp(h.degree(j) / (2 * n)) for j in range(n) if colour[j] == side)
        )
    passed = estimate <= bound + settings.ASSERT_SIGMAS * error
    if not passed:
        logger.error(f"Exponential moment {estimate:.5f} exceeds exp(pm/n) = {bound:.5f}")
    return DeviationReport(
        kind="expectation",
        trials=trials,
        estimate=Quantity.monte_carlo(estimate, half_width(error)),
        bound=Quantity.formula(bound),
        vacuous=False,
        passed=passed,
        seed=seed,
        edges=m,
        extras={"product_bound": Quantity.formula(min(product_bounds))},
        records=records,
    )


def tail_check_directed(
    h: Graph,
    p: float,
    trials: int,
    seed: int,
    loops: bool = False,
    threads: Optional[int] = None,
) -> DeviationReport:
    """
    P(e(H ∩ hat(D)) >= m/16 and Delta(D) <= 5pn - 1) against
    exp(-m / 5 sqrt n). With ``loops`` the digraph carries self-loops and the
    degree condition is Delta <= 5pn.
    """
    two_colouring(h)
    p = check_probability(p)
    n, m = h.n, h.edge_count
    _check_small_p(p, n)
    degree_cap = 5 * p * n if loops else 5 * p * n - 1

    def trial(index: int, rng: np.random.Generator) -> dict:
        d = sample_digraph(n, p, rng, loops=loops)
        closed = h.intersection(hat(d)).edge_count
        degree = d.max_out_degree
        return {
            "trial": index,
            "closed": closed,
            "max_out_degree": degree,
            "loops_removed_closed": h.intersection(hat(remove_loops(d))).edge_count if loops else closed,
            "event": int(16 * closed >= m and degree <= degree_cap),
        }

    records = run_trials(trial, trials, seed, threads=threads)
    bound = math.exp(-GAMMA_DIRECTED * m / math.sqrt(n))
    extras = {"degree_cap": degree_cap}
    if p > 0:
        # exponential moment bound before the constants are simplified
        extras["moment_bound"] = math.exp((m / (p * n)) * (p * p * n - 1 / 80))
    return _probability_report(sum(r["event"] for r in records), trials, bound, seed, records, m, extras)


def tail_check_undirected(
    h: Graph,
    p: float,
    trials: int,
    seed: int,
    degree_filter: bool = True,
    threads: Optional[int] = None,
) -> DeviationReport:
    """
    P(e(H ∩ Γ²) >= 3m/4 and Delta(Γ) < 2pn) for Γ ~ G(n,p) against
    15 exp(-m / 10 sqrt n). Without ``degree_filter`` the degree condition
    is dropped (diagnostic mode).
    """
    p = check_probability(p)
    n, m = h.n, h.edge_count
    _check_small_p(p, n)

    def trial(index: int, rng: np.random.Generator) -> dict:
        gamma = sample_gnp(n, p, rng)
        closed = count_closed(h, gamma)
        degree = gamma.max_degree
        y = 4 * closed >= 3 * m
        small_degree = degree < 2 * p * n
        return {
            "trial": index,
            "closed": closed,
            "max_degree": degree,
            "event": int(y and (small_degree or not degree_filter)),
        }

    records = run_trials(trial, trials, seed, threads=threads)
    bound = 15 * math.exp(-GAMMA * m / math.sqrt(n))
    return _probability_report(sum(r["event"] for r in records), trials, bound, seed, records, m)


def _rate(hits: int, runs: int) -> Quantity:
    rate, error = proportion(hits, runs)
    return Quantity.monte_carlo(rate, half_width(error))


def union_bound(edge_counts: Sequence[int], n: int, gamma: float = GAMMA, epsilon: float = EPSILON) -> float:
    """sum_H 15 exp(-gamma e(H)/sqrt n) + exp(-epsilon e(H)/(4 sqrt n))."""
    root = math.sqrt(n)
    return math.fsum(
        15 * math.exp(-gamma * e / root) + math.exp(-epsilon * e / (4 * root)) for e in edge_counts
    )


def hitting_experiment(
    family: List[Graph],
    n: int,
    p: float,
    runs: int,
    seed: int,
    threads: Optional[int] = None,
) -> HittingReport:
    """
    Samples Γ ~ G(n,p) and a random maximal triangle-free G inside it, then
    per H records

    - Z: Delta(Γ) >= 2pn,
    - Y_H: e(H ∩ Γ²) >= 3e(H)/4,
    - X_H: Γ holds no H-good edge,
    - whether G meets H.

    Every run must satisfy "good edge present => G meets H" and the
    decomposition "some H missed => Z, or Y_H without Z, or X_H without Y_H".
    """
    p = check_probability(p)
    for h in family:
        if h.n != n:
            raise ValueError(f"family member on {h.n} vertices, expected {n}")

    def trial(index: int, rng: np.random.Generator) -> dict:
        gamma = sample_gnp(n, p, rng)
        g = maximal_triangle_free(gamma, rng)
        z = gamma.max_degree >= 2 * p * n
        hits, y_flags, x_flags = [], [], []
        implication = 0
        for h in family:
            m = h.edge_count
            x = len(h_good_edges(h, gamma)) == 0
            y = 4 * count_closed(h, gamma) >= 3 * m
            hit = g.intersects(h)
            implication += (not x) and not hit
            hits.append(hit)
            x_flags.append(x)
            y_flags.append(y)
        missed = not all(hits)
        explained = z or any(y and not z for y in y_flags) or any(
            x and not y for x, y in zip(x_flags, y_flags)
        )
        return {
            "trial": index,
            "gamma_edges": gamma.edge_count,
            "g_edges": g.edge_count,
            "z": int(z),
            "hits": sum(hits),
            "x_count": sum(x_flags),
            "y_count": sum(y_flags),
            "implication_violations": implication,
            "decomposition_violation": int(missed and not explained),
            "_hits": hits,
        }

    records = run_trials(trial, runs, seed, threads=threads)
    hit_totals = np.zeros(len(family))
    for record in records:
        hit_totals += np.array(record.pop("_hits"), dtype=float)
    implication = sum(r["implication_violations"] for r in records)
    decomposition = sum(r["decomposition_violation"] for r in records)
    if implication or decomposition:
        logger.error(f"Hitting run broke {implication} implications and {decomposition} decompositions")
    return HittingReport(
        runs=runs,
        family_size=len(family),
        hit_rates=[_rate(int(x), runs) for x in hit_totals] if runs else [],
        z_rate=_rate(sum(r["z"] for r in records), runs) if runs else Quantity.exact(0.0),
        implication_violations=implication,
        decomposition_violations=decomposition,
        union_budget=Quantity.formula(union_bound([h.edge_count for h in family], n)),
        records=records,
    )


def fractional_hitting(
    wfamily: WeightedFamily,
    n: int,
    p: float,
    runs: int,
    seed: int,
    threads: Optional[int] = None,
) -> FractionalHittingReport:
    """Distribution of the total weight of members a random maximal triangle-free graph misses."""
    p = check_probability(p)
    if len(wfamily) and wfamily.n != n:
        raise ValueError(f"family on {wfamily.n} vertices, expected {n}")
    if runs < 1:
        raise ValueError("runs must be at least 1")

    def trial(index: int, rng: np.random.Generator) -> dict:
        gamma = sample_gnp(n, p, rng)
        g = maximal_triangle_free(gamma, rng)
        missed = [weight for h, weight in wfamily.members if not g.intersects(h)]
        return {"trial": index, "missed_count": len(missed), "missed_weight": math.fsum(missed)}

    records = run_trials(trial, runs, seed, threads=threads)
    weights = np.array([r["missed_weight"] for r in records])
    below, error = proportion(int((weights < 1).sum()), runs)
    spread = float(weights.std(ddof=1)) / math.sqrt(runs) if runs > 1 else 0.0
    return FractionalHittingReport(
        runs=runs,
        mean_missed_weight=Quantity.monte_carlo(math.fsum(weights) / runs, half_width(spread)),
        max_missed_weight=Quantity.exact(float(weights.max())),
        quantiles={
            f"q{int(q * 100)}": Quantity.exact(float(np.quantile(weights, q))) for q in (0.5, 0.9, 0.99)
        },
        fraction_below_one=Quantity.monte_carlo(below, half_width(error)),
        records=records,
    )


def delta_budget(epsilon: float, gamma: float) -> float:
    if epsilon <= 0 or gamma <= 0:
        raise ValueError("epsilon and gamma must be positive")
    return min(epsilon / 4, gamma) / 5


def ramsey_clique_size(n: int, constant: float) -> int:
    """ceil(C sqrt(n) log n)."""
    return math.ceil(constant * math.sqrt(n) * math.log(n))


def clique_family_classes(n: int, k: int) -> List[FamilyClass]:
    """All C(n, k) cliques of size k as one class; empty when k > n."""
    if k > n or k < 0:
        return []
    return [FamilyClass(log_multiplicity=log_binomial(n, k), edges=k * (k - 1) // 2)]


FamilyLike = Union[Sequence[Graph], WeightedFamily, Sequence[FamilyClass]]


def family_condition_check(family: FamilyLike, delta: float, n: int) -> ConditionReport:
    """
    sum_H a(H) exp(-delta e(H) / sqrt n), summed in log space; the family
    condition holds when the sum is below 1/2.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    root = math.sqrt(n)
    terms: List[float] = []
    if isinstance(family, WeightedFamily):
        members = family.members
    else:
        members = list(family)
    for item in members:
        if isinstance(item, FamilyClass):
            if item.weight > 0:
                terms.append(item.log_multiplicity + math.log(item.weight) - delta * item.edges / root)
        elif isinstance(item, Graph):
            terms.append(-delta * item.edge_count / root)
        else:
            graph, weight = item
            if weight > 0:
                terms.append(math.log(weight) - delta * graph.edge_count / root)
    log_sum = float(logsumexp(terms)) if terms else -math.inf
    try:
        total = math.exp(log_sum)
    except OverflowError:
        total = math.inf
    return ConditionReport(
        log_sum=Quantity.formula(log_sum),
        sum=Quantity.formula(total),
        satisfied=log_sum < math.log(0.5),
        delta=Quantity.exact(delta),
        n=n,
    )
