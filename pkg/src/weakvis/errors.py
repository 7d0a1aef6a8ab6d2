"""Exception taxonomy shared by all modules."""


class ValidationError(ValueError):
    """Input polygon rejected.  `kind` is a stable machine-readable label."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class ParseError(ValueError):
    """Malformed polygon file: bad JSON or bad schema."""

    def __init__(self, message: str, line=None, col=None):
        loc = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{loc}")
        self.line = line
        self.col = col


class InvalidQuery(ValueError):
    """Query segment violates its preconditions (outside, touching boundary...)."""


class UnsupportedDegeneracy(ValueError):
    """Exact degenerate configuration the algorithms refuse to handle.

    Raised instead of perturbing; the caller can perturb the input and retry.
    """


class OnCarrier(ValueError):
    """Point location query sits exactly on a subdivision edge."""


class InternalInconsistency(RuntimeError):
    """A structural self-check failed, indicating a bug, not bad input."""
