"""Exception hierarchy shared by all modules."""


class WillmoreLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationFailed(WillmoreLabError):
    """A mesh violates one of the closed, oriented, genus-0 invariants."""


class NonManifold(ValidationFailed):
    pass


class WrongGenus(ValidationFailed):
    pass


class DegenerateFace(ValidationFailed):
    pass


class InwardOrientation(ValidationFailed):
    pass


class ParseError(WillmoreLabError):
    """Malformed mesh file. Carries the 1-based line and column."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)


class LevelTooLarge(WillmoreLabError):
    pass


class GridTooCoarse(WillmoreLabError):
    pass


class DomainError(WillmoreLabError, ValueError):
    """Argument outside the domain where a closed form is defined."""


class NoConvergence(WillmoreLabError):
    pass


class PrecisionLoss(WillmoreLabError):
    """Richardson extrapolants stopped converging.

    ``table`` holds the ``(r, ratio)`` rows evaluated so far and
    ``extrapolants`` the diagonal of the tableau.
    """

    def __init__(self, message, table=(), extrapolants=()):
        super().__init__(message)
        self.table = list(table)
        self.extrapolants = list(extrapolants)


class SampleBudgetTooSmall(WillmoreLabError):
    pass


class MeshTooLarge(WillmoreLabError):
    pass
