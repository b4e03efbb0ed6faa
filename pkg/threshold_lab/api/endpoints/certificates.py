from threshold_lab.api.deps import build_family
from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext, verdict
from threshold_lab.core.certificates import q_exact, qf_exact, verify_sandwich
from threshold_lab.schemas.params import QParams, SandwichParams

router = CommandRouter()


@router.command("qexact", params=QParams)
def expectation_threshold(params: QParams, ctx: RunContext) -> EndpointResult:
    """Expectation-threshold q with its witnessing certificate (N <= 4)."""
    family = build_family(params.family, seed=ctx.master_seed)
    return EndpointResult(summary=q_exact(family, params.tol))


@router.command("qfrac", params=QParams)
def fractional_expectation_threshold(params: QParams, ctx: RunContext) -> EndpointResult:
    """Fractional expectation-threshold q_f with its fractional certificate (N <= 5)."""
    family = build_family(params.family, seed=ctx.master_seed)
    return EndpointResult(summary=qf_exact(family, params.tol, solver=params.solver))


@router.command("sandwich", params=SandwichParams)
def sandwich(params: SandwichParams, ctx: RunContext) -> EndpointResult:
    """Checks the chain between p_c, q_f and q in the family's direction."""
    family = build_family(params.family, seed=ctx.master_seed)
    report = verify_sandwich(family, params.tol)
    return EndpointResult(summary=report, status=verdict(report.passed))
