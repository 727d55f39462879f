import enum


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"


class EvalMethod(str, enum.Enum):
    SERIES = "series"
    RECIPROCAL = "reciprocal"  # 1 / E_1(-z) for the exponential on the negative axis
    LAPLACE = "laplace"  # spectral integral for 0 < alpha < 1, z < 0


class Command(str, enum.Enum):
    EVAL = "eval"
    DEFECT = "defect"
    GRID = "grid"
    CLASSIFY = "classify"
    MATRIX = "matrix"
    CAPUTO_CHECK = "caputo-check"
    FIT = "fit"
    TRACE = "trace"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"
