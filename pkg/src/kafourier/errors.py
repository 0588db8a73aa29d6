"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a formula is valid."""


class PoleError(DomainError):
    """Evaluation at a pole (Gamma at non-positive integers, sinh z = 0)."""


class ScopeError(ValueError):
    """The requested case is not covered by the closed forms implemented here."""


class ConvergenceError(ArithmeticError):
    """A series or extrapolation did not reach the requested tolerance."""
