"""Exception types raised by the toolkit."""


class SplitRingError(Exception):
    """Base class for all toolkit errors."""


class InvalidGeometry(SplitRingError, ValueError):
    """A geometry constraint is violated; the message names the constraint."""


class SingularSystem(SplitRingError, ArithmeticError):
    """The driven-loop impedance matrix is numerically singular."""


class PointOnConductor(SplitRingError, ValueError):
    """A field evaluation point lies on (or within tolerance of) a conductor."""


class VolumeExceedsBore(SplitRingError, ValueError):
    """A sampling volume does not fit inside the ring bore."""


class ZeroMeanField(SplitRingError, ValueError):
    """Homogeneity is undefined because the mean field vanishes."""


class NoFeasiblePoint(SplitRingError, RuntimeError):
    """No evaluated candidate satisfied every design constraint."""


class FitDiverged(SplitRingError, RuntimeError):
    """A nonlinear fit failed to reach an acceptable residual."""


class InsufficientOscillations(SplitRingError, ValueError):
    """A trace does not span enough oscillation periods to fit."""


class NoDipFound(SplitRingError, ValueError):
    """A reflection trace contains no resonance dip."""


class DegenerateInput(SplitRingError, ValueError):
    """Inputs are degenerate for the requested operation."""


class ConfigError(SplitRingError, ValueError):
    """A run configuration failed to parse or validate."""
