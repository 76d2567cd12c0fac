"""
Exception hierarchy for the path homology toolkit.

Every error carries a short ``code`` so the command line can print a
single ``error[<code>]: <message>`` line.
"""


class PathHomologyError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class ModeMismatchError(PathHomologyError, ValueError):
    code = "mode-mismatch"


class FieldError(PathHomologyError, ValueError):
    code = "field"


class NestingError(PathHomologyError, ValueError):
    code = "nesting"


class AmbientMismatchError(PathHomologyError, ValueError):
    code = "ambient"


class NotInSpanError(PathHomologyError, ValueError):
    code = "span"


class DegreeError(PathHomologyError, ValueError):
    code = "degree"


class RegularityError(PathHomologyError, ValueError):
    code = "regularity"


class DomainError(PathHomologyError, ValueError):
    code = "domain"


class ClosureError(PathHomologyError, ValueError):
    code = "closure"


class OrderError(PathHomologyError, ValueError):
    code = "order"


class WeightDomainError(PathHomologyError, ValueError):
    code = "weight"


class MorphismError(PathHomologyError, ValueError):
    code = "morphism"


class HomotopyVerificationError(PathHomologyError, ValueError):
    """A link f_{k-1} -> f_k of a homotopy chain failed verification."""

    code = "homotopy"

    def __init__(self, message, link=None):
        super().__init__(message)
        self.link = link


class ChainEndpointError(PathHomologyError, ValueError):
    code = "chain-endpoint"


class ConsistencyError(PathHomologyError, RuntimeError):
    """An internal invariant failed. Indicates a bug, never bad input."""

    code = "consistency"


class ParseError(PathHomologyError, ValueError):
    code = "parse"

    def __init__(self, message, source=None, line=None):
        location = ""
        if source is not None:
            location = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(f"{location}{message}")
        self.source = source
        self.line = line


class UsageError(PathHomologyError, ValueError):
    code = "usage"


class StabilityViolationError(PathHomologyError, AssertionError):
    code = "stability-violation"

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed
