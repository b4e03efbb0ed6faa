import logging

from threshold_lab.api.deps import build_graph, build_graphs, build_weighted
from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext, verdict
from threshold_lab.core.deviation import (
    EPSILON,
    GAMMA,
    clique_family_classes,
    delta_budget,
    family_condition_check,
    fractional_hitting,
    hitting_experiment,
    moment_check,
    ramsey_clique_size,
    tail_check_directed,
    tail_check_undirected,
)
from threshold_lab.schemas.params import (
    ConditionParams,
    FracHittingParams,
    HittingParams,
    MomentParams,
    TailDirParams,
    TailUndirParams,
)
from threshold_lab.schemas.reports import DeviationReport

logger = logging.getLogger(__name__)

router = CommandRouter()


def _deviation_result(report: DeviationReport) -> EndpointResult:
    if report.vacuous:
        logger.warning(f"Bound {report.bound.value:.4g} is vacuous; nothing was asserted")
    return EndpointResult(
        summary=report, records=report.records, status=verdict(report.passed, report.vacuous)
    )


@router.command("moment", params=MomentParams)
def moment(params: MomentParams, ctx: RunContext) -> EndpointResult:
    """Exponential moment of the edge count inside a random vertex subset."""
    h = build_graph(params.h)
    return _deviation_result(moment_check(h, params.p, ctx.trials, ctx.master_seed, threads=ctx.threads))


@router.command("tail-dir", params=TailDirParams)
def tail_directed(params: TailDirParams, ctx: RunContext) -> EndpointResult:
    """Tail of e(H ∩ hat(D)) for a random digraph D."""
    h = build_graph(params.h)
    report = tail_check_directed(
        h, params.p, ctx.trials, ctx.master_seed, loops=params.loops, threads=ctx.threads
    )
    return _deviation_result(report)


@router.command("tail-undir", params=TailUndirParams)
def tail_undirected(params: TailUndirParams, ctx: RunContext) -> EndpointResult:
    """Tail of e(H ∩ Gamma^2) for Gamma ~ G(n,p)."""
    h = build_graph(params.h)
    report = tail_check_undirected(
        h, params.p, ctx.trials, ctx.master_seed, degree_filter=params.degree_filter, threads=ctx.threads
    )
    return _deviation_result(report)


@router.command("hitting", params=HittingParams)
def hitting(params: HittingParams, ctx: RunContext) -> EndpointResult:
    """Random maximal triangle-free subgraphs of G(n,p) against a family of graphs."""
    family = build_graphs(params.family)
    report = hitting_experiment(family, params.n, params.p, ctx.trials, ctx.master_seed, threads=ctx.threads)
    passed = report.implication_violations == 0 and report.decomposition_violations == 0
    return EndpointResult(summary=report, records=report.records, status=verdict(passed))


@router.command("frac-hitting", params=FracHittingParams)
def frac_hitting(params: FracHittingParams, ctx: RunContext) -> EndpointResult:
    """Total weight of the members a random maximal triangle-free graph misses."""
    wfamily = build_weighted(params.family)
    report = fractional_hitting(wfamily, params.n, params.p, ctx.trials, ctx.master_seed, threads=ctx.threads)
    return EndpointResult(summary=report, records=report.records)


@router.command("condition", params=ConditionParams)
def condition(params: ConditionParams, ctx: RunContext) -> EndpointResult:
    """Whether sum_H exp(-delta e(H) / sqrt n) stays below 1/2."""
    delta = delta_budget(EPSILON, GAMMA) if params.delta is None else params.delta
    if params.family is not None:
        family = build_graphs(params.family)
    elif params.weighted is not None:
        family = build_weighted(params.weighted)
    else:
        cliques = params.cliques
        k = cliques.k if cliques.k is not None else ramsey_clique_size(params.n, cliques.constant)
        logger.info(f"Clique family with k = {k} on n = {params.n}")
        family = clique_family_classes(params.n, k)
    return EndpointResult(summary=family_condition_check(family, delta, params.n))
