"""
Samplers for G(n,p) and the directed model, the common-in-neighbour graph
of a digraph, and the coupling of an undirected graph with a directed one.
"""

import logging
import math
from collections import defaultdict
from typing import Dict, Optional

import numpy as np
from scipy.stats import chisquare

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import InvalidP
from threshold_lab.core.family import check_probability
from threshold_lab.core.graphs import square
from threshold_lab.core.seeding import SeedLike, as_generator, run_trials
from threshold_lab.core.stats import half_width
from threshold_lab.model.digraph import CoupledSample, Digraph
from threshold_lab.model.graph import Graph
from threshold_lab.model.ground_set import iter_bits
from threshold_lab.schemas.graph import DigraphSchema
from threshold_lab.schemas.reports import CaptureClass, CaptureReport, MarginalTest, Quantity

logger = logging.getLogger(__name__)

MARGINAL_P_VALUE = 1e-3


def _rows(matrix: np.ndarray) -> tuple:
    """Boolean adjacency matrix to one bitset per row; column j is bit j."""
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def _matrix(rows: tuple, n: int) -> np.ndarray:
    """Inverse of ``_rows``."""
    width = max(1, (n + 7) // 8)
    packed = np.frombuffer(b"".join(row.to_bytes(width, "little") for row in rows), dtype=np.uint8)
    return np.unpackbits(packed.reshape(n, width), axis=1, bitorder="little")[:, :n].astype(bool)


def sample_gnp(n: int, p: float, seed: SeedLike) -> Graph:
    """
    Every pair {u, v} present independently with probability p, one draw per
    pair in canonical edge order.
    """
    p = check_probability(p)
    rng = as_generator(seed)
    upper = np.triu_indices(n, 1)
    draws = rng.random(len(upper[0])) < p
    matrix = np.zeros((n, n), dtype=bool)
    matrix[upper] = draws
    matrix |= matrix.T
    return Graph(n, _rows(matrix))


def sample_digraph(n: int, p: float, seed: SeedLike, loops: bool = False) -> Digraph:
    """
    Every arc (u, v) present independently with probability p. The draws are
    laid out over all n^2 ordered pairs in (source, target) order and the
    diagonal is discarded without loops, so removing the loops of a sample
    with loops gives the loopless sample of the same seed.
    """
    p = check_probability(p)
    rng = as_generator(seed)
    matrix = (rng.random(n * n) < p).reshape(n, n)
    if not loops:
        np.fill_diagonal(matrix, False)
    return Digraph(n, _rows(matrix), loops_allowed=loops)


def remove_loops(digraph: Digraph) -> Digraph:
    return Digraph(
        digraph.n,
        tuple(row & ~(1 << v) for v, row in enumerate(digraph.out)),
        loops_allowed=False,
    )


def hat(digraph: Digraph) -> Graph:
    """Pairs of distinct vertices with a common in-neighbour."""
    adj = [0] * digraph.n
    for v, row in enumerate(digraph.out):
        for u in iter_bits(row):
            adj[u] |= row
    return Graph(digraph.n, tuple(row & ~(1 << u) for u, row in enumerate(adj)))


def coupled_p_prime(p: float) -> float:
    """Solves 2p' - p'^2 = p, i.e. p' = 1 - sqrt(1 - p)."""
    p_prime = -math.expm1(0.5 * math.log1p(-p))
    if abs(2 * p_prime - p_prime * p_prime - p) > 1e-12:
        raise ArithmeticError(f"p' = {p_prime!r} does not solve 2p' - p'^2 = {p!r}")
    return p_prime


def couple(n: int, p: float, seed: SeedLike) -> CoupledSample:
    """
    Samples D from the directed model at p' and undirects it; the result is
    distributed as G(n, p) and every out-degree of D is at most the degree of
    the same vertex in the undirected graph.
    """
    p = check_probability(p)
    if p == 1.0:
        raise InvalidP("p = 1 forces p' = 1; the coupling needs p < 1")
    p_prime = coupled_p_prime(p)
    d = sample_digraph(n, p_prime, seed)
    return CoupledSample(gamma=d.undirected(), d=d, p=p, p_prime=p_prime)


def predicted_capture(p: float, p_prime: float, common: int) -> float:
    """Chance that a pair with ``common`` common neighbours lies in hat(D)."""
    ratio = (p_prime / p) ** 2
    return -math.expm1(common * math.log1p(-ratio))


def conditional_square_capture(
    n: int,
    p: float,
    seed: int,
    trials: int,
    threads: Optional[int] = None,
) -> CaptureReport:
    """
    For coupled samples, how often an edge of the square of the undirected
    graph lies in hat(D), per number of common neighbours. Every class has
    to reach 1/4 up to CAPTURE_SIGMAS standard errors.
    """
    p = check_probability(p)
    if p == 1.0:
        raise InvalidP("p = 1 forces p' = 1; the coupling needs p < 1")
    p_prime = coupled_p_prime(p)

    def trial(index: int, rng: np.random.Generator) -> dict:
        sample = couple(n, p, rng)
        gamma = sample.gamma
        closed = square(gamma)
        captured_graph = hat(sample.d)
        pairs: Dict[int, int] = defaultdict(int)
        captured: Dict[int, int] = defaultdict(int)
        for u, w in closed.edges():
            common = (gamma.adj[u] & gamma.adj[w]).bit_count()
            pairs[common] += 1
            captured[common] += captured_graph.has_edge(u, w)
        return {
            "trial": index,
            "gamma_edges": gamma.edge_count,
            "square_edges": closed.edge_count,
            "captured": sum(captured.values()),
            "max_out_degree": sample.d.max_out_degree,
            "max_degree": gamma.max_degree,
            "degree_ok": sample.d.max_out_degree <= gamma.max_degree,
            "_pairs": dict(pairs),
            "_captured": dict(captured),
        }

    records = run_trials(trial, trials, seed, threads=threads)
    pairs: Dict[int, int] = defaultdict(int)
    captured: Dict[int, int] = defaultdict(int)
    for record in records:
        for common, count in record.pop("_pairs").items():
            pairs[common] += count
        for common, count in record.pop("_captured").items():
            captured[common] += count

    classes = []
    passed = True
    for common in sorted(pairs):
        frequency = captured[common] / pairs[common]
        error = math.sqrt(frequency * (1 - frequency) / pairs[common])
        classes.append(
            CaptureClass(
                common_neighbours=common,
                pairs=pairs[common],
                captured=captured[common],
                frequency=Quantity.monte_carlo(frequency, half_width(error)),
                predicted=Quantity.formula(predicted_capture(p, p_prime, common)),
            )
        )
        # the assertion uses the standard error under frequency 1/4
        if frequency < 0.25 - settings.CAPTURE_SIGMAS * math.sqrt(0.1875 / pairs[common]):
            logger.error(f"Capture class {common}: frequency {frequency:.4f} below 1/4")
            passed = False
    degree_violations = sum(not r["degree_ok"] for r in records)
    if degree_violations:
        logger.error(f"Out-degree exceeded degree in {degree_violations} coupled samples")
    return CaptureReport(
        trials=trials,
        p_prime=Quantity.formula(p_prime),
        classes=classes,
        min_frequency=min((c.frequency for c in classes), key=lambda q: q.value, default=None),
        passed=passed and degree_violations == 0,
        degree_violations=degree_violations,
        records=records,
    )


def coupling_marginal_test(
    n: int,
    p: float,
    samples: int,
    seed: int,
    threads: Optional[int] = None,
) -> MarginalTest:
    """
    Chi-square goodness of fit, pooled over all vertex pairs of ``samples``
    coupled samples: the undirected edge indicator against Bernoulli(p) and
    the four arc states of a pair against the product law at p'.
    """
    p = check_probability(p)
    if p == 1.0:
        raise InvalidP("p = 1 forces p' = 1; the coupling needs p < 1")
    p_prime = coupled_p_prime(p)
    if p == 0.0:
        return MarginalTest(
            samples=samples,
            gamma_statistic=Quantity.exact(0.0),
            gamma_pvalue=Quantity.exact(1.0),
            arc_statistic=Quantity.exact(0.0),
            arc_pvalue=Quantity.exact(1.0),
            passed=True,
        )
    upper = np.triu_indices(n, 1)

    def trial(index: int, rng: np.random.Generator) -> np.ndarray:
        sample = couple(n, p, rng)
        out = _matrix(sample.d.out, n)
        forward, backward = out[upper], out.T[upper]
        edge = _matrix(sample.gamma.adj, n)[upper]
        return np.array(
            [
                int(edge.sum()),
                int((~forward & ~backward).sum()),
                int((forward & ~backward).sum()),
                int((~forward & backward).sum()),
                int((forward & backward).sum()),
            ]
        )

    totals = np.sum(run_trials(trial, samples, seed, threads=threads), axis=0)
    pairs = samples * len(upper[0])
    gamma = chisquare([pairs - totals[0], totals[0]], f_exp=[pairs * (1 - p), pairs * p])
    q = 1 - p_prime
    arc = chisquare(
        totals[1:],
        f_exp=[pairs * q * q, pairs * p_prime * q, pairs * p_prime * q, pairs * p_prime * p_prime],
    )
    passed = gamma.pvalue > MARGINAL_P_VALUE and arc.pvalue > MARGINAL_P_VALUE
    return MarginalTest(
        samples=samples,
        gamma_statistic=Quantity.exact(float(gamma.statistic)),
        gamma_pvalue=Quantity.formula(float(gamma.pvalue)),
        arc_statistic=Quantity.exact(float(arc.statistic)),
        arc_pvalue=Quantity.formula(float(arc.pvalue)),
        passed=passed,
    )


def digraph_to_json(digraph: Digraph) -> dict:
    return DigraphSchema(n=digraph.n, arcs=digraph.arcs(), loops_allowed=digraph.loops_allowed).model_dump()


def digraph_from_json(data: dict) -> Digraph:
    parsed = DigraphSchema.model_validate(data)
    return Digraph.from_arcs(parsed.n, parsed.arcs, parsed.loops_allowed)
