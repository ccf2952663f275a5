"""Exception taxonomy shared across the toolkit.

Command line entry points map these onto process exit codes: invalid
input -> 2, numerical failure -> 3, file I/O failure -> 4.
"""


class CcsIcaError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(CcsIcaError):
    """An argument violates a documented precondition."""


class RankDeficient(CcsIcaError):
    """Sample covariance is numerically singular, whitening refused."""


class SingularDemixer(CcsIcaError):
    """Demixing matrix determinant collapsed below the working floor."""


class DegenerateDivergence(CcsIcaError):
    """A divergence ratio degenerated to log of 0/0."""


class NonFinite(CcsIcaError):
    """A NaN or infinity entered an iterative computation."""


class IoFailure(CcsIcaError):
    """A file could not be read, parsed, or written."""
