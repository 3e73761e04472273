"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A run configuration violates one of its invariants."""


class TruncationInadequate(RuntimeError):
    """The requested computation is not representable at this truncation."""


class DegenerateDisentangle(ArithmeticError):
    """The disentangling denominator vanishes; no factored form exists."""


class BranchCut(ArithmeticError):
    """A factor coefficient sits on the logarithm branch cut."""


class SignUnresolved(RuntimeError):
    """Neither orientation of the similarity relation wins decisively."""


class DegenerateState(ValueError):
    """A state has (numerically) vanishing metric norm."""


class IllConditioned(ArithmeticError):
    """A matrix inverse was requested beyond the trusted condition number."""
