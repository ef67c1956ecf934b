"""Exception hierarchy shared by every codec in the package."""


class CodecError(Exception):
    """Base class for all errors raised by catrit."""


class ContractViolation(CodecError, ValueError):
    """A caller broke a documented precondition (bad width, bad table...)."""


class DomainError(CodecError, ValueError):
    """Input outside the domain of an operation (zero gap, non-increasing list...)."""


class OutOfDataError(CodecError, EOFError):
    """A bit reader was asked for more bits than it holds."""


class TruncatedStreamError(CodecError):
    """A symbol stream ended before the expected number of items was seen."""


class InconsistencyError(CodecError, ValueError):
    """Two parts of a decomposition do not agree with each other."""


class UnencodableSymbolError(CodecError, ValueError):
    """The arithmetic coder was asked to code a symbol with zero frequency."""


class FormatError(CodecError, ValueError):
    """A serialized payload or raw index file is malformed."""
