"""Exception hierarchy shared by the evaluator, the growth harness and the CLI."""


class QZetaError(Exception):
    """Base class for all errors raised by :mod:`qzeta`."""


class GammaPoleError(QZetaError, ValueError):
    """Argument of log-gamma sits on (or within 1e-12 of) a non-positive integer."""


class PoleProximityError(QZetaError, ValueError):
    """Evaluation point is closer to a pole of zeta_q than the hard margin allows.

    Attributes
    ----------
    nearest : complex
        Nearest point of the relevant pole lattice.
    margin : float
        The epsilon-margin (or lattice distance) actually observed.
    """

    def __init__(self, message, nearest, margin):
        super().__init__(message)
        self.nearest = nearest
        self.margin = margin


class BudgetExceededError(QZetaError, RuntimeError):
    """Term or precision budget ran out before the requested tolerance was met."""


class InsufficientDataError(QZetaError, ValueError):
    """Too few usable scan rows for a bound check or an exponent fit."""
