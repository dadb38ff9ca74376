"""Exception types shared across the package."""


class GPError(Exception):
    """Base class for all package errors."""


class OddSampleCount(GPError):
    """Grid sample count must be even."""


class InvalidGrid(GPError):
    """Grid parameters out of range (L <= 0 or n < 16)."""


class FileFormatError(GPError):
    """Malformed GPF1 file or mismatched grid."""


class BracketNotFound(GPError):
    """Shooting bracket does not straddle the decaying solution."""


class NonConvergence(GPError):
    """Iteration budget exhausted without meeting the tolerance."""


class InvalidProfile(GPError):
    """Radial profile violates the Pohozaev identities."""


class BoxTooSmall(GPError):
    """Radial profile does not fit inside the periodic box."""


class UnnormalizedInput(GPError):
    """Field expected to have unit mass."""


class DegenerateField(GPError):
    """Field with vanishing quartic integral."""


class ResolutionExceeded(GPError):
    """Requested dilation is not resolvable on this grid."""


class CriticalCouplingGuard(GPError):
    """Coupling too close to the critical value for a finite grid."""


class UnderResolved(GPError):
    """Field too narrow to rescale reliably."""


class InsufficientData(GPError):
    """Not enough resolved sweep entries for a fit."""


class ConfigError(GPError):
    """Bad configuration file or CLI arguments."""
