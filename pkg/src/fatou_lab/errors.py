"""Exception types shared across the toolkit."""


class ParameterError(ValueError):
    """An argument is outside the documented range."""


class GridMismatchError(ParameterError):
    """Two grid-carried objects live on different grids."""


class SingularityError(ValueError):
    """Evaluation requested at a point where the kernel is singular."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge or is ill-conditioned."""


class CoverageError(RuntimeError):
    """A sampled approach region contains no sample points."""


class DomainError(ValueError):
    """A geometric map was applied outside its domain."""
