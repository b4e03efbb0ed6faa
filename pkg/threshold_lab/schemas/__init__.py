"""
This package contains every model that crosses a file or command-line boundary.
"""

from .config import ExperimentConfig, RunManifest
from .family import FamilySpec
from .graph import (
    CertificateSchema,
    CoverSchema,
    DigraphSchema,
    FractionalCertificateSchema,
    GraphSchema,
)
from .params import GraphSpec, WeightedGraphSpec
from .reports import (
    BipartiteReport,
    CaptureReport,
    CertVerdict,
    ConditionReport,
    CoverCheckReport,
    DeviationReport,
    ExpectationThreshold,
    FractionalHittingReport,
    HittingReport,
    MarginalTest,
    MonteCarloEstimate,
    Quantity,
    SandwichReport,
    ThresholdEstimate,
)
