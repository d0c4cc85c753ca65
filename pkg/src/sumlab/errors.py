"""Warning categories raised by the numerical routines."""


class SumlabWarning(UserWarning):
    pass


class AccuracyWarning(SumlabWarning):
    """Input lies outside the range where accuracy guarantees hold."""


class ConvergenceWarning(SumlabWarning):
    """A quadrature or series did not meet its stopping criterion."""


class TailWarning(ConvergenceWarning):
    """The tail of a truncated contour integral exceeds the tolerance."""
