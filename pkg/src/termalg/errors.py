"""Exceptions shared across the package."""


class TermalgError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(TermalgError):
    pass


class ExprError(TermalgError):
    """Malformed parameter expression (syntax, identically-zero divisor, ...)."""


class EvaluationError(TermalgError):
    """Expression evaluation failed: missing parameter or division by zero."""


class ExclusionViolated(TermalgError):
    """A parameter binding hits an excluded value of a template."""


class NotACocycle(TermalgError):
    """A bilinear form failed the cocycle identity for the given algebra."""


class DependentClasses(TermalgError):
    """Cohomology classes expected to be independent are not."""


class NotAnAutomorphism(TermalgError):
    pass


class CatalogError(TermalgError):
    """Catalog file problems; carries a location when one is known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line
