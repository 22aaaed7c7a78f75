"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input (unknown labels, duplicate ground labels, bad files)."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class HypothesisViolation(PreconditionError):
    """A theorem's hypothesis does not hold for the given family."""


class LimitExceeded(ValueError):
    """An exact enumeration would exceed its configured size limit."""
