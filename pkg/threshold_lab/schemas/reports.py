"""
Results as they appear in summary.json. Every number reported to the user
is either a bare count or a ``Quantity`` carrying its provenance. Graphs,
certificates and covers are reported as data.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .graph import CertificateSchema, FractionalCertificateSchema, GraphSchema

Provenance = Literal["exact", "monte-carlo", "formula"]


class Quantity(BaseModel):
    value: float = Field(..., description="the reported number")
    provenance: Provenance = Field(..., description="how the number was obtained")
    half_width: Optional[float] = Field(
        None, description="95% half-width, monte-carlo only", example=0.003
    )

    @classmethod
    def exact(cls, value: float) -> "Quantity":
        return cls(value=value, provenance="exact")

    @classmethod
    def formula(cls, value: float) -> "Quantity":
        return cls(value=value, provenance="formula")

    @classmethod
    def monte_carlo(cls, value: float, half_width: float) -> "Quantity":
        return cls(value=value, provenance="monte-carlo", half_width=half_width)


class MonteCarloEstimate(BaseModel):
    """Internal form of a membership estimate; endpoints report it as a ``Quantity``."""

    estimate: float
    half_width: float
    standard_error: float
    trials: int
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)

    def as_quantity(self) -> Quantity:
        return Quantity.monte_carlo(self.estimate, self.half_width)


class ThresholdEstimate(BaseModel):
    """Result of a bisection: the midpoint of the final bracket."""

    threshold: Quantity
    lo: Quantity
    hi: Quantity
    levels: int = Field(0, description="number of bisection steps")
    stopped_on_interval: bool = Field(
        False, description="refinement stopped because the estimate's interval straddled 1/2"
    )
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)

    @property
    def value(self) -> float:
        return self.threshold.value

    @property
    def provenance(self) -> Provenance:
        return self.threshold.provenance


class CertVerdict(BaseModel):
    cost: Quantity
    covers: bool
    p_small: bool
    sampled: bool = Field(False, description="coverage was checked on samples only")

    @model_validator(mode="after")
    def p_small_needs_cover(self):
        if self.cost.value < 0:
            raise ValueError("cost must be non-negative")
        if self.p_small and not (self.covers and self.cost.value <= 0.5):
            raise ValueError("p_small requires covers and cost <= 1/2")
        return self


class ExpectationThreshold(BaseModel):
    threshold: Quantity
    lo: Quantity
    hi: Quantity
    cost_at_lo: Quantity
    cost_at_hi: Quantity
    certificate: Optional[CertificateSchema] = None
    fractional_certificate: Optional[FractionalCertificateSchema] = None

    @property
    def value(self) -> float:
        return self.threshold.value


class SandwichReport(BaseModel):
    direction: Literal["up", "down"]
    p_c: Quantity
    q_f: Quantity
    q: Quantity
    tolerance: Quantity
    passed: bool


class DeviationReport(BaseModel):
    """
    A Monte Carlo estimate checked against a closed-form bound.
    """

    kind: Literal["probability", "expectation"] = "probability"
    trials: int
    event_count: Optional[int] = None
    estimate: Quantity = Field(..., description="monte-carlo, with its 95% half-width")
    bound: Quantity = Field(..., description="the closed-form bound being checked")
    vacuous: bool
    passed: bool
    seed: int
    edges: Optional[int] = Field(None, description="e(H) of the fixed graph")
    extras: Dict[str, Quantity] = Field(default_factory=dict)
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)

    @model_validator(mode="after")
    def vacuity_matches_bound(self):
        if self.kind == "probability":
            if self.vacuous != (self.bound.value >= 1):
                raise ValueError("vacuous must hold exactly when the bound is at least 1")
            if not 0.0 <= self.estimate.value <= 1.0:
                raise ValueError("a probability estimate must lie in [0, 1]")
        elif self.vacuous:
            raise ValueError("expectation bounds are never vacuous")
        return self


class CaptureClass(BaseModel):
    common_neighbours: int
    pairs: int
    captured: int
    frequency: Quantity
    predicted: Quantity


class CaptureReport(BaseModel):
    trials: int
    p_prime: Quantity
    classes: List[CaptureClass]
    min_frequency: Optional[Quantity]
    passed: bool
    degree_violations: int
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)


class MarginalTest(BaseModel):
    samples: int
    gamma_statistic: Quantity
    gamma_pvalue: Quantity
    arc_statistic: Quantity
    arc_pvalue: Quantity
    passed: bool


class HittingReport(BaseModel):
    runs: int
    family_size: int
    hit_rates: List[Quantity]
    z_rate: Quantity
    implication_violations: int
    decomposition_violations: int
    union_budget: Quantity
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)


class FractionalHittingReport(BaseModel):
    runs: int
    mean_missed_weight: Quantity
    max_missed_weight: Quantity
    quantiles: Dict[str, Quantity]
    fraction_below_one: Quantity
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)


class ConditionReport(BaseModel):
    log_sum: Quantity
    sum: Quantity
    satisfied: bool
    delta: Quantity
    n: int


class CoverCheckReport(BaseModel):
    n: int
    m: int
    size: int
    mode: Literal["exhaustive", "sampled"]
    cover_mode: str = Field("exact", description="edge count rule of the members")
    in_range: bool
    valid: Optional[bool] = Field(None, description="None when the sampled search was inconclusive")
    witness: Optional[GraphSchema] = None
    examined: int = 0
    forest_union_bound: Optional[Quantity] = Field(None, description="at least 1 for every valid cover")


class BipartiteReport(BaseModel):
    trials: int
    forest_edges: int
    bound: Quantity
    estimate: Quantity
    exact: Optional[Quantity] = None
    passed: bool
    records: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)


class GoodCheckReport(BaseModel):
    mode: Literal["exhaustive", "sampled"]
    good_edges: int
    good_candidates: int
    closed_edges: int
    examined: Optional[int] = Field(None, description="None for the exhaustive search")
    counterexample: Optional[GraphSchema] = None
    passed: bool


class AlphaReport(BaseModel):
    n: int
    edges: int
    triangle_free: bool
    alpha: Quantity


class FboundReport(BaseModel):
    m: int
    n: int
    q_upper_bound: Optional[Quantity] = Field(None, description="log(2 f) / m, given a cover size f")
    clique_size: int = Field(..., description="k = ceil(2 sqrt m) of the clique cover")
    clique_cover_log_size: Quantity
    shape_bound: Quantity
    container_bound_log: Quantity
