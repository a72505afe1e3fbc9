"""Exception hierarchy shared across the package."""


class HeckeCellsError(Exception):
    """Base class for every error raised by this package."""


class MalformedCartan(HeckeCellsError, ValueError):
    pass


class InfiniteGroup(HeckeCellsError):
    pass


class UnknownElement(HeckeCellsError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MalformedDocument(HeckeCellsError, ValueError):
    pass


class NonUnitriangular(HeckeCellsError, ValueError):
    pass


class ValidationFailed(HeckeCellsError):
    """A p-canonical table failed validation; `report` holds the details."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedType(HeckeCellsError):
    pass


class MissingTable(HeckeCellsError):
    """No p-canonical table is available for the requested system and p."""


class ShapeMismatch(HeckeCellsError, ValueError):
    pass


class SizeMismatch(HeckeCellsError, ValueError):
    pass


class NotComparable(HeckeCellsError, ValueError):
    pass


class NotPositive(HeckeCellsError, ValueError):
    pass


class NoConvergence(HeckeCellsError, ArithmeticError):
    pass


class NoMinimum(HeckeCellsError):
    pass


class AmbiguousProjection(HeckeCellsError, ArithmeticError):
    pass


class NotAPartition(HeckeCellsError):
    pass


class CellMismatch(HeckeCellsError):
    """SCC cells disagree with the Robinson-Schensted fibers."""
