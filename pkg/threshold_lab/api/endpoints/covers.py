from threshold_lab.api.deps import build_cover, build_graph
from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext, verdict
from threshold_lab.core.covers import (
    bipartite_lower_bound_experiment,
    container_bound_log,
    find_small_alpha,
    find_uncovered,
    forest_union_bound,
    independence_number,
    q_upper_bound,
    ramsey_clique_cover,
    ramsey_cover_log_size,
)
from threshold_lab.core.graphs import graph_to_json, is_triangle_free
from threshold_lab.schemas.graph import CoverSchema, GraphSchema
from threshold_lab.schemas.params import (
    AlphaParams,
    BipartiteLbParams,
    CoverCheckParams,
    CoverGenParams,
    FboundParams,
)
from threshold_lab.schemas.reports import AlphaReport, CoverCheckReport, FboundReport, Quantity

router = CommandRouter()


@router.command("cover-gen", params=CoverGenParams)
def cover_gen(params: CoverGenParams, ctx: RunContext) -> EndpointResult:
    """The clique cover: K_n minus a k-clique, for every k-subset."""
    cover = ramsey_clique_cover(params.n, params.k)
    members = [member.edges() for member in cover.members]
    return EndpointResult(summary=CoverSchema(n=cover.n, m=cover.m, relaxed=cover.relaxed, members=members))


@router.command("cover-check", params=CoverCheckParams)
def cover_check(params: CoverCheckParams, ctx: RunContext) -> EndpointResult:
    """Whether every triangle-free graph on [n] lies inside a member of the cover."""
    cover = build_cover(params.cover) if params.cover is not None else ramsey_clique_cover(params.n, params.k)
    examined = 0
    if params.mode == "exhaustive":
        witness = find_uncovered(cover, threads=ctx.threads)
        valid = witness is None
    else:
        witness, examined = find_small_alpha(
            params.n, params.k, mode="sampled", trials=ctx.trials, seed=ctx.master_seed
        )
        valid = False if witness is not None else None
    report = CoverCheckReport(
        n=cover.n,
        m=cover.m,
        size=len(cover),
        mode=params.mode,
        cover_mode=cover.mode,
        in_range=cover.in_range,
        valid=valid,
        witness=None if witness is None else GraphSchema(**graph_to_json(witness)),
        examined=examined,
        forest_union_bound=Quantity.formula(forest_union_bound(cover)),
    )
    return EndpointResult(summary=report, status=verdict(valid))


@router.command("alpha", params=AlphaParams)
def alpha(params: AlphaParams, ctx: RunContext) -> EndpointResult:
    """Independence number by branch and bound (n <= 40)."""
    graph = build_graph(params.graph)
    report = AlphaReport(
        n=graph.n,
        edges=graph.edge_count,
        triangle_free=is_triangle_free(graph),
        alpha=Quantity.exact(independence_number(graph)),
    )
    return EndpointResult(summary=report)


@router.command("fbound", params=FboundParams)
def fbound(params: FboundParams, ctx: RunContext) -> EndpointResult:
    """Upper bounds on q(T_n) from covers with m common non-edges."""
    clique = ramsey_cover_log_size(params.m, params.n)
    upper = None
    if params.cover_size is not None:
        upper = Quantity.formula(q_upper_bound(params.m, params.n, params.cover_size))
    report = FboundReport(
        m=params.m,
        n=params.n,
        q_upper_bound=upper,
        clique_size=clique["k"],
        clique_cover_log_size=Quantity.formula(clique["log_size"]),
        shape_bound=Quantity.formula(clique["shape_bound"]),
        container_bound_log=Quantity.formula(container_bound_log(params.n, params.constant)),
    )
    return EndpointResult(summary=report)


@router.command("bipartite-lb", params=BipartiteLbParams)
def bipartite_lb(params: BipartiteLbParams, ctx: RunContext) -> EndpointResult:
    """P(G ⊆ H) for a random complete bipartite G against 2^(-e(T))."""
    h = build_graph(params.h)
    report = bipartite_lower_bound_experiment(h, ctx.trials, ctx.master_seed, threads=ctx.threads)
    return EndpointResult(summary=report, records=report.records, status=verdict(report.passed))
