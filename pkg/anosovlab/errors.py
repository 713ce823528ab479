"""Exceptions raised by the library; the CLI maps all of them to exit status 2."""


class AnosovLabError(Exception):
    """Base class for every error raised on invalid input or violated preconditions."""


class InvalidInputError(AnosovLabError, ValueError):
    """Malformed matrix, orbit id, move or out-of-range bound."""


class NotHyperbolicError(AnosovLabError, ValueError):
    """The matrix is not a hyperbolic element of GL(2,Z)."""


class StandingAssumptionError(AnosovLabError, ValueError):
    """The matrix is hyperbolic but outside det = 1, trace >= 3."""


class OverlappingOrbitsError(AnosovLabError, ValueError):
    """The same orbit was given twice to a complement or surgery computation."""


class UnknownOrbitError(AnosovLabError, KeyError):
    """An orbit id does not name an orbit of the flow."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SurgeryLocusError(AnosovLabError, ValueError):
    """The orbit is one of the surgered orbits; it has been replaced by a core orbit.

    Attributes:
        core: The distinguished core token that replaces the orbit.
    """

    def __init__(self, message: str, core=None):
        super().__init__(message)
        self.core = core


class DegenerateGeometryError(AnosovLabError):
    """A curve or arc of the chosen arc system is not in general position."""


class RenderError(AnosovLabError):
    """A report template failed to compile or render."""
