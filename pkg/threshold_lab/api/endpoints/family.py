import logging

from threshold_lab.api.deps import build_family
from threshold_lab.api.router import CommandRouter, EndpointResult, RunContext
from threshold_lab.core.family import (
    MONOTONE_EXHAUSTIVE_LIMIT,
    mu_p_exact,
    mu_p_monte_carlo,
    threshold_bracket,
    threshold_monte_carlo,
)
from threshold_lab.schemas.params import MuParams, ThresholdParams
from threshold_lab.schemas.reports import Quantity

logger = logging.getLogger(__name__)

router = CommandRouter()


def _exact(method: str, size: int) -> bool:
    return method == "exact" or (method == "auto" and size <= MONOTONE_EXHAUSTIVE_LIMIT)


@router.command("mu", params=MuParams)
def measure(params: MuParams, ctx: RunContext) -> EndpointResult:
    """Measure mu_p of a family, exactly or by Monte Carlo."""
    family = build_family(params.family, seed=ctx.master_seed)
    if _exact(params.method, family.ground.size):
        return EndpointResult(summary=Quantity.exact(mu_p_exact(family, params.p)))
    estimate = mu_p_monte_carlo(family, params.p, ctx.trials, ctx.master_seed, threads=ctx.threads)
    return EndpointResult(summary=estimate.as_quantity(), records=estimate.records)


@router.command("threshold", params=ThresholdParams)
def threshold(params: ThresholdParams, ctx: RunContext) -> EndpointResult:
    """Critical probability p_c: the p at which mu_p crosses 1/2."""
    family = build_family(params.family, seed=ctx.master_seed)
    if _exact(params.method, family.ground.size):
        return EndpointResult(summary=threshold_bracket(family, params.tol))
    logger.info(f"Monte Carlo bisection for {family.label} with {ctx.trials} trials per level")
    estimate = threshold_monte_carlo(family, ctx.trials, ctx.master_seed, tol=params.tol, threads=ctx.threads)
    return EndpointResult(summary=estimate, records=estimate.records)
