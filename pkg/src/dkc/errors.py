"""Exception hierarchy shared by the simulator modules."""


class DKCError(Exception):
    """Base class for every error raised by :mod:`dkc`."""


class InvalidInputError(DKCError, ValueError):
    """A physical parameter is out of its admissible range."""


class UnsupportedUnitError(DKCError, ValueError):
    pass


class DomainError(DKCError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class IntegrationError(DKCError, RuntimeError):
    """The ODE integrator could not advance the solution.

    Attributes
    ----------
    t_last : float
        Last time at which the solution was successfully computed.
    """

    def __init__(self, message, t_last):
        super().__init__(f"{message} (last good t = {t_last!r})")
        self.t_last = t_last


class FocusCrossingError(DKCError, RuntimeError):
    """The scaling factor collapsed to zero (over-kicked cloud)."""

    def __init__(self, t_collapse):
        super().__init__(f"scaling factor collapsed at t = {t_collapse!r} s")
        self.t_collapse = t_collapse


class BracketError(DKCError, ValueError):
    pass


class ConvergenceError(DKCError, RuntimeError):
    pass


class NumericalConsistencyError(DKCError, ArithmeticError):
    pass


class AiryOverflowError(DKCError, OverflowError):
    pass
