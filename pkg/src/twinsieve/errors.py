"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A requested computation exceeds a configured size cap or budget."""


class PreconditionError(ValueError):
    """Inputs violate the hypotheses an operation is stated under."""
