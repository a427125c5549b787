"""Exception types raised by the simulation and estimation code."""


class SizeLimitError(ValueError):
    """Requested system exceeds the configured dense-backend cap."""


class ContractViolationError(ValueError):
    """An operation was called outside its precondition."""


class InternalSimulationError(RuntimeError):
    """A numerical branch that should be unreachable was taken."""
