from threshold_lab.api.deps import build_graph
from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext, verdict
from threshold_lab.core.graphs import (
    count_closed,
    count_good_candidates,
    goodness_implies_hitting_check,
    graph_to_json,
)
from threshold_lab.schemas.graph import GraphSchema
from threshold_lab.schemas.params import GoodCheckParams
from threshold_lab.schemas.reports import GoodCheckReport

router = CommandRouter()


@router.command("good-check", params=GoodCheckParams)
def good_check(params: GoodCheckParams, ctx: RunContext) -> EndpointResult:
    """If Gamma holds an H-good edge, every maximal triangle-free subgraph of Gamma meets H."""
    h, gamma = build_graph(params.h), build_graph(params.gamma)
    result = goodness_implies_hitting_check(
        h, gamma, mode=params.mode, samples=ctx.trials, seed=ctx.master_seed
    )
    witness = result["counterexample"]
    report = GoodCheckReport(
        mode=params.mode,
        good_edges=result["good_edges"],
        good_candidates=count_good_candidates(h, gamma),
        closed_edges=count_closed(h, gamma),
        examined=result["examined"],
        counterexample=None if witness is None else GraphSchema(**graph_to_json(witness)),
        passed=witness is None,
    )
    return EndpointResult(summary=report, status=verdict(report.passed))
