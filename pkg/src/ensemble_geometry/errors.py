"""Exception types raised across the package."""


class EnsembleGeometryError(Exception):
    """Base class for all package errors."""


class ShapeError(EnsembleGeometryError, ValueError):
    """Inputs that should share an (n, p) shape (or a length) do not."""


class ScoreRangeError(EnsembleGeometryError, ValueError):
    """A score or label entry violates its allowed range."""


class GeometryError(EnsembleGeometryError, ValueError):
    """Distance data that cannot come from any real point set."""


class DomainError(EnsembleGeometryError, ValueError):
    """An argument falls outside the domain of a closed-form curve."""


class BudgetError(EnsembleGeometryError, RuntimeError):
    """Exhaustive search would exceed the configured subset budget."""


class StratificationError(EnsembleGeometryError, ValueError):
    """A dataset cannot be split while keeping every class on both sides."""


class UnsupportedMetricError(EnsembleGeometryError, ValueError):
    """A metric was requested on data it is not defined for."""


class UndefinedStatisticError(EnsembleGeometryError, ValueError):
    """A statistic is undefined for the given sample (e.g. zero variance)."""


class FormatError(EnsembleGeometryError, ValueError):
    """A file does not follow the expected layout."""
