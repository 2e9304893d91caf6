"""Exception and warning types shared across the toolkit."""


class QcorrError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(QcorrError):
    """Operands disagree on subsystem dimensions or matrix shape."""


class NotHermitian(QcorrError):
    pass


class NotPositive(QcorrError):
    """An eigenvalue is negative beyond the repair tolerance."""


class BadTrace(QcorrError):
    pass


class BadRank(QcorrError):
    """Requested rank is not in 1..dim."""


class NOutOfRange(QcorrError):
    """Noise parameter outside [0, 1]."""


class UnrealizableClass(QcorrError):
    """No measurement of the requested class exists at this dimension."""


class VerificationFailed(QcorrError):
    """A randomized construction failed its self-check after retries."""


class SingularReference(QcorrError):
    """Reference state too singular for a recovery map."""


class InfiniteRelativeEntropy(QcorrError):
    """Relative entropy diverges where a finite value is required."""


class MessageOverflow(QcorrError):
    """Instrument outcomes exceed the declared message dimension."""


class NotProductInput(QcorrError):
    """Initial state is not a tensor product of its marginals."""


class VanishingClassWarning(UserWarning):
    """Minimized quantity is an infimum that vanishes for this class."""
