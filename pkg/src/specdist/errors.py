"""Exception hierarchy shared across the package.

Every error carries an ``exit_code`` used by the command-line front end;
errors of the same family (size/shape problems, definiteness problems)
share a code.
"""


class SpecDistError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class NonHermitianInput(SpecDistError):
    """Input matrix is not Hermitian within tolerance."""


class ConvergenceFailure(SpecDistError):
    """The underlying eigenvalue solver did not converge."""


class IndefiniteInput(SpecDistError):
    """A nominally positive-(semi)definite matrix has an eigenvalue below
    the tolerated negativity band."""

    exit_code = 5


class NotPositiveDefinite(SpecDistError):
    """A matrix or spectrum that must be positive definite is not, even
    after eigenvalue flooring."""

    exit_code = 5


class NegativeDistance(SpecDistError):
    """A squared distance came out negative beyond the round-off band;
    indicates a numerical bug, not an input problem."""


class DimensionMismatch(SpecDistError):
    """Operands have incompatible dimensions or sizes."""

    exit_code = 4


class GridMismatch(DimensionMismatch):
    """Two spectra do not share the same frequency grid."""


class GridTooCoarse(DimensionMismatch):
    """Frequency grid too short to resolve the requested lag band."""


class LagTooLarge(DimensionMismatch):
    """Requested lag exceeds what the frequency grid can resolve."""


class TooFewSegments(DimensionMismatch):
    """Time series too short for the requested segmentation."""


class SingularAr(SpecDistError):
    """The autoregressive polynomial is numerically singular at some
    evaluation frequency."""


class UnstableModel(SpecDistError):
    """Autoregressive part has a root on or inside the unit circle."""


class NonRealResidue(SpecDistError):
    """Inverse transform of a spectrum left an imaginary part too large to
    discard; the spectrum does not describe a real-valued process."""


class ParseError(SpecDistError):
    """An input file could not be parsed into the expected structure."""

    exit_code = 3


class FitDegenerateWarning(UserWarning):
    """Extrapolation fit input was non-monotone beyond noise level."""
