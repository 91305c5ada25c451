"""Exception taxonomy shared by all omegalab modules."""


class OmegalabError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(OmegalabError, ValueError):
    """An argument is outside the documented range (e.g. an even functor index)."""


class PreconditionError(OmegalabError, ValueError):
    """An input violates a documented precondition (e.g. a graph is not square-free)."""


class ResourceError(OmegalabError, RuntimeError):
    """A configured budget (vertices, simplices, search nodes) was exhausted.

    Deliberately distinct from a negative answer: callers must never treat
    a budget cutoff as a proof of non-existence.
    """


class ContractError(OmegalabError, RuntimeError):
    """An internal consistency check failed; indicates a bug or a falsified claim."""


class ParseError(OmegalabError, ValueError):
    """A text file does not follow the documented format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
