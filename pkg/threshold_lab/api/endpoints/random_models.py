from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext, verdict
from threshold_lab.core.random_models import conditional_square_capture, coupling_marginal_test
from threshold_lab.schemas.params import CouplingParams

router = CommandRouter()


@router.command("couple", params=CouplingParams)
def couple(params: CouplingParams, ctx: RunContext) -> EndpointResult:
    """Chi-square tests of the marginals of coupled (Gamma, D) samples."""
    report = coupling_marginal_test(params.n, params.p, ctx.trials, ctx.master_seed, threads=ctx.threads)
    return EndpointResult(summary=report, status=verdict(report.passed))


@router.command("capture", params=CouplingParams)
def capture(params: CouplingParams, ctx: RunContext) -> EndpointResult:
    """Frequency with which edges of the square land in hat(D), per common-neighbour count."""
    report = conditional_square_capture(params.n, params.p, ctx.master_seed, ctx.trials, threads=ctx.threads)
    return EndpointResult(summary=report, records=report.records, status=verdict(report.passed))
