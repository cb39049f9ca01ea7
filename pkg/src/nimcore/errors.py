"""Exception types shared across the package."""


class NimcoreError(Exception):
    """Base class for all package-specific errors."""


class InvalidPositionError(NimcoreError, ValueError):
    """A position violates its structural invariants or does not fit the rules."""


class IllegalMoveError(NimcoreError, ValueError):
    """A move is not legal in the position it was applied to."""


class ContractViolationError(NimcoreError, ValueError):
    """A caller broke a bounded-difference precondition (e.g. too many changed heaps)."""


class MemoLimitError(NimcoreError, RuntimeError):
    """A memo table hit its configured capacity."""


class GateBudgetError(NimcoreError, RuntimeError):
    """A circuit construction would exceed its gate budget."""


class ThresholdCapError(NimcoreError, ValueError):
    """A threshold exceeds the configured constant cap."""


class UnsupportedModelError(NimcoreError, ValueError):
    """A network uses features the circuit lowering does not cover (negative weights)."""


class EncodingError(NimcoreError, ValueError):
    """A bit-level encoding or arity does not match what a consumer expects."""


class StrategyDomainError(NimcoreError, ValueError):
    """A specialised strategy was asked to move in a position outside its domain."""


class CircuitFormatError(NimcoreError, ValueError):
    """Circuit text could not be parsed or a circuit is structurally invalid."""
