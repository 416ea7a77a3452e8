"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error this package raises deliberately."""


class StructureParseError(ToolkitError):
    """Malformed structure file. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VocabularyMismatchError(ToolkitError):
    """Two structures that must share a vocabulary do not."""


class CapExceededError(ToolkitError):
    """A configured resource cap (play budget, table budget, vertex cap) was hit."""


class ArityError(ToolkitError):
    """A symbol of arity > 2 where the modal constructions require arity <= 2."""


class PointError(ToolkitError):
    """A pointed structure was required but no distinguished element is present."""


class CycleError(ToolkitError):
    """A reachable cycle where a finite unravelling depth is required."""


class UnboundVariableError(ToolkitError):
    """Formula evaluation hit a free variable missing from the environment."""


class CertificateError(ToolkitError):
    """A certificate file is malformed (audit *failures* are verdicts, not errors)."""
