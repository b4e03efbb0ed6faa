from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Settings for this application.

    You can override the variables with a .env file.
    You can override the variables (and .env file) by environment variables.
    """

    PROJECT_NAME: str = "threshold-lab"

    # Default worker count for trial-parallel commands; --threads overrides it
    THRESHOLDLAB_THREADS: int = 1
    # joblib backend used for the worker pool
    PARALLEL_BACKEND: Literal["threading", "loky", "sequential"] = "threading"

    LOG_LEVEL: str = "INFO"

    # Bisection tolerances
    EXACT_TOL: float = 1e-6
    MC_TOL: float = 1e-2

    # Fractional cover LP
    LP_SOLVER: Literal["highs", "rational"] = "highs"
    LP_VALIDATION_TOL: float = 1e-9
    HIGHS_TIME_LIMIT: float = 60.0

    # Statistical assertions: multiples of the standard error
    ASSERT_SIGMAS: float = 3.0
    CAPTURE_SIGMAS: float = 4.0
    # z-value of the reported two-sided 95% half-widths
    CONFIDENCE_Z: float = 1.96

    MONOTONE_SAMPLE_PAIRS: int = 10_000
    SANDWICH_TOL: float = 1e-5

    OUTPUT_DIR: str = "runs"

    @field_validator("THRESHOLDLAB_THREADS")
    def at_least_one_thread(cls, v: int) -> int:
        if v < 1:
            raise ValueError("THRESHOLDLAB_THREADS must be at least 1")
        return v

    class Config:
        case_sensitive = True
        env_file = ".env"


settings = Settings()
