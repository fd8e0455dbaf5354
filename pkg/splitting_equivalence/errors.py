"""Exception hierarchy shared by the library and the command-line front end."""


class SplittingError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SplittingError, ValueError):
    """Rejected input: dimension mismatch, bad parameter, wrong function kind."""


class ConfigurationError(InvalidInputError):
    """A config file or the environment settings could not be parsed or validated."""


class NumericalError(SplittingError, ArithmeticError):
    """A numerical precondition failed or a computation did not succeed."""


class SingularGramError(NumericalError):
    """L*L is numerically singular."""


class NotPositiveSemidefiniteError(NumericalError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class InnerSolverError(NumericalError):
    """The iterative resolvent fallback did not reach its tolerance."""


class UnsupportedValueError(SplittingError, NotImplementedError):
    """Function value requested where no closed form is available."""
