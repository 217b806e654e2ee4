"""Exception types shared across the package."""


class BohrKitError(Exception):
    """Base class for every error raised by bohrkit."""


class DomainError(BohrKitError, ValueError):
    """An argument lies outside its documented domain."""


class ContractError(BohrKitError, ValueError):
    """A structural precondition (declared flag, required hypothesis) is not met."""


class NonConvergent(BohrKitError, RuntimeError):
    """A certified summation could not reach the requested tolerance within the index cap."""


class NoRootInRange(BohrKitError, RuntimeError):
    """A radius equation shows no sign change on the scanned interval."""


class NoWitness(BohrKitError, RuntimeError):
    """A sharpness scan produced no point where the sum beats the bound."""
