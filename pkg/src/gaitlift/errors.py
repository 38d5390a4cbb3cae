"""Exception types shared across the package."""


class GaitliftError(Exception):
    """Base class for all gaitlift errors."""


class InvalidColoring(GaitliftError):
    """A colouring references nodes that do not exist or is not total."""


class NotBalanced(GaitliftError):
    """Operation requires a balanced colouring and the given one is not."""


class UnknownNetwork(GaitliftError):
    """Requested builtin network name is not in the catalogue."""


class UnresolvedSymbol(GaitliftError):
    """A symbolic connection weight has no binding in the parameters."""


class DimensionMismatch(GaitliftError):
    """State vector length does not match the network."""


class NonFinite(GaitliftError):
    """Integration produced a non-finite state component."""


class NoOscillation(GaitliftError):
    """Trajectory amplitude is below the oscillation floor."""


class IrregularPeriod(GaitliftError):
    """Crossing gaps vary too much to define a single period."""


class ClosureFailure(GaitliftError):
    """Candidate periodic orbit does not close up within tolerance."""


class StructureMismatch(GaitliftError):
    """Network is not a recognised lift, or block structure is violated."""


class NoConvergence(GaitliftError):
    """Eigenvalue iteration failed to converge."""


class EpsilonOutOfRange(GaitliftError):
    """Analytic bound is only defined for epsilon in (0, 4]."""
