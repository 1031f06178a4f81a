"""Exception hierarchy.

Every error carries a stable upper-case ``code`` so the CLI can print a
single greppable line (``error[CODE]: message``) before exiting non-zero.
"""


class HfcovError(Exception):
    code = "HFCOV_ERROR"


class EmptySeries(HfcovError, ValueError):
    code = "EMPTY_SERIES"


class NonMonotoneTimes(HfcovError, ValueError):
    code = "NON_MONOTONE_TIMES"


class IndexOutOfRange(HfcovError, IndexError):
    code = "INDEX_OUT_OF_RANGE"


class GridMismatch(HfcovError, ValueError):
    code = "GRID_MISMATCH"


class TuningOutOfRange(HfcovError, ValueError):
    code = "TUNING_OUT_OF_RANGE"


class NegativeVariance(HfcovError, ValueError):
    code = "NEGATIVE_VARIANCE"


class DegenerateConfig(HfcovError, ValueError):
    code = "DEGENERATE_CONFIG"


class UnequalNoise(HfcovError, ValueError):
    code = "UNEQUAL_NOISE"


class ParameterOutOfRange(HfcovError, ValueError):
    code = "PARAMETER_OUT_OF_RANGE"


class ParseError(HfcovError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(HfcovError, ValueError):
    code = "CONFIG_ERROR"
