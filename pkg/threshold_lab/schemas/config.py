from datetime import datetime
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

SEED_LIMIT = 2**64


class ExperimentConfig(BaseModel):
    """
    One experiment: a subcommand with its parameters and an explicit seed.
    Echoed verbatim into config.json of the run.
    """

    model_config = ConfigDict(extra="forbid")

    subcommand: str = Field(..., description="subcommand to run", example="threshold")
    params: Dict[str, Any] = Field(default_factory=dict, example={"family": "triangle-free", "n": 16})
    master_seed: int = Field(..., ge=0, lt=SEED_LIMIT, description="64-bit master seed", example=7)
    trials: int = Field(1000, ge=0, description="Monte Carlo trials (per level for thresholds)")
    output_path: str = Field("runs/latest", description="directory receiving the artifacts")
    format: Literal["csv", "json"] = Field("csv", description="format of the per-trial file")


class RunManifest(BaseModel):
    config_hash: str = Field(..., description="sha256 of config.json")
    version: str = Field(..., description="threshold-lab version")
    started: datetime
    finished: datetime
    module_versions: Dict[str, str] = Field(default_factory=dict)
    data_files: Dict[str, str] = Field(default_factory=dict, description="sha256 per data file")
    exit_status: int
    threads: Optional[int] = None
