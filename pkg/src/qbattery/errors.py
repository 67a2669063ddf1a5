"""Exception hierarchy shared by every module of the package."""


class QBatteryError(Exception):
    """Base class for all package errors."""


# linear algebra

class NotHermitian(QBatteryError, ValueError):
    pass


class NoConvergence(QBatteryError, RuntimeError):
    pass


class BadIndex(QBatteryError, ValueError):
    pass


class BadPermutation(QBatteryError, ValueError):
    pass


class LengthMismatch(QBatteryError, ValueError):
    pass


# states

class InvalidState(QBatteryError, ValueError):
    """A state failed one of its invariants."""


class BadTrace(InvalidState):
    pass


class NegativeDiagonal(InvalidState):
    pass


class BlockNotPSD(InvalidState):
    pass


class NotAState(InvalidState):
    pass


class BadBeta(InvalidState):
    pass


# hamiltonians and capacity

class InvalidHamiltonian(QBatteryError, ValueError):
    pass


class NotSorted(QBatteryError, ValueError):
    pass


# distribution / optimizer

class BadLength(QBatteryError, ValueError):
    pass


class BadArity(QBatteryError, ValueError):
    pass


class NotViolatedAtZero(QBatteryError, ValueError):
    pass


class TooLarge(QBatteryError, ValueError):
    pass


class SchurViolation(QBatteryError, ArithmeticError):
    """Raised when a majorized pair breaks the capacity ordering."""
