"""
Errors raised by threshold-lab.

Every error carries the process exit status the CLI reports for it.
"""

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_ASSERTION = 2
EXIT_INCONCLUSIVE = 3
EXIT_CONFIG_INVALID = 4
EXIT_REPLAY_MISMATCH = 5


class ThresholdLabError(Exception):
    exit_status: int = EXIT_ERROR


class GroundSetTooLarge(ThresholdLabError):
    def __init__(self, size: int, limit: int, what: str = "ground set"):
        super().__init__(f"{what} of size {size} exceeds the limit {limit}")
        self.size = size
        self.limit = limit


class TooLarge(GroundSetTooLarge):
    pass


class TrivialFamily(ThresholdLabError):
    pass


class NotMonotone(ThresholdLabError):
    pass


class Inconclusive(ThresholdLabError):
    exit_status = EXIT_INCONCLUSIVE


class LPNumericalFailure(ThresholdLabError):
    pass


class InvalidP(ThresholdLabError):
    pass


class NotBipartite(ThresholdLabError):
    pass


class PTooLarge(ThresholdLabError):
    pass


class MonotonicityViolation(ThresholdLabError):
    exit_status = EXIT_ASSERTION


class ConfigInvalid(ThresholdLabError):
    exit_status = EXIT_CONFIG_INVALID

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ReplayMismatch(ThresholdLabError):
    exit_status = EXIT_REPLAY_MISMATCH
