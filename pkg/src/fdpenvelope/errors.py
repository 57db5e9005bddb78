"""Exception hierarchy for the package.

All library errors derive from FdpError so callers (and the CLI) can catch
one base class and map it to a data-error exit code.
"""


class FdpError(Exception):
    pass


# --- constants / solvers ---

class NoRoot(FdpError):
    """Bracketing search found no sign change (malformed h, or x <= 1)."""


class NonConvergence(FdpError):
    """Root finder hit its iteration cap."""


class AlphaOutOfProvenRange(FdpError):
    """alpha exceeds the proven range of the sorted-path bound (0.31)."""


class QuadratureFailure(FdpError):
    """Adaptive quadrature could not resolve the accumulation integral."""


class DomainError(FdpError):
    """Closed-form constant evaluated outside its domain."""


# --- paths ---

class EmptyInput(FdpError):
    pass


class InvalidPermutation(FdpError):
    pass


class LambdaBelowPstar(FdpError):
    pass


class AllZeroStats(FdpError):
    """Every knockoff statistic was zero; no sign information remains."""


# --- envelopes ---

class FamilyMismatch(FdpError):
    """Constant family incompatible with the estimator that produced V-hat."""


class AlphaTooLargeForDKW(FdpError):
    """The one-sided DKW band requires alpha < 0.5."""


# --- online monitor ---

class MissingBCap(FdpError):
    pass


class TicketOutstanding(FdpError):
    """A level was committed but the matching p-value was never observed."""


class StaleTicket(FdpError):
    """observe() called with a ticket that is not the outstanding commit."""


class BCapExceeded(FdpError):
    pass


class LambdaBelowAlpha(FdpError):
    pass


# --- interactive session ---

class ConfigInvalid(FdpError):
    pass


class AlreadySelected(FdpError):
    pass


class UnknownId(FdpError):
    pass


# --- dataset ingestion ---

class ParseError(FdpError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateId(ParseError):
    pass


class ValueOutOfRange(ParseError):
    pass
