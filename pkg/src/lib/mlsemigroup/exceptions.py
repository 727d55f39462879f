from typing import Optional


class MLError(Exception):
    """Base error. ``exit_code`` is what the CLI returns when it surfaces the error."""

    exit_code: int = 1

    def __init__(self, detail: str, parameter: Optional[str] = None):
        self.detail = detail
        self.parameter = parameter
        super().__init__(f"{parameter}: {detail}" if parameter else detail)


class DomainError(MLError, ValueError):
    pass


class EvaluationOverflowError(DomainError):
    pass


class ConvergenceError(MLError):
    pass


class DegenerateDivisionError(MLError):
    pass


class InconclusiveError(MLError):
    def __init__(self, sup_abs: float, tol: float, threshold: float):
        self.sup_abs = sup_abs
        super().__init__(
            f"sup |defect| = {sup_abs!r} lies in ({tol!r}, {threshold!r}); "
            "refine the grid or the tolerances",
            parameter="threshold",
        )


class GridCellError(MLError):
    def __init__(self, t_index: int, s_index: int, cause: MLError):
        self.t_index = t_index
        self.s_index = s_index
        self.cause = cause
        super().__init__(
            f"cell (t[{t_index}], s[{s_index}]) failed: {cause}",
            parameter=cause.parameter,
        )


class EigenConvergenceError(MLError):
    pass
