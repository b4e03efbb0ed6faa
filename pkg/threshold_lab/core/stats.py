import math
from typing import Iterable, Tuple

import numpy as np
from scipy.special import logsumexp

from threshold_lab.core.config import settings


def compensated_sum(values: Iterable[float]) -> float:
    return math.fsum(values)


def proportion(successes: int, trials: int) -> Tuple[float, float]:
    """
    Returns the empirical frequency and its standard error.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    estimate = successes / trials
    return estimate, math.sqrt(estimate * (1.0 - estimate) / trials)


def half_width(standard_error: float) -> float:
    return settings.CONFIDENCE_Z * standard_error


def mean_of_exp(log_values: np.ndarray) -> Tuple[float, float]:
    """
    Mean of exp(log_values) and its standard error, computed relative to the
    largest term so that large exponents do not overflow.
    """
    log_values = np.asarray(log_values, dtype=float)
    count = log_values.size
    if count == 0:
        raise ValueError("need at least one value")
    log_mean = float(logsumexp(log_values) - math.log(count))
    if count == 1:
        return math.exp(log_mean), 0.0
    top = float(log_values.max())
    scaled = np.exp(log_values - top)
    spread = float(np.std(scaled, ddof=1)) * math.exp(top)
    return math.exp(log_mean), spread / math.sqrt(count)


def log_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
