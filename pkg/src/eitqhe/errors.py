"""Exception hierarchy shared across the toolkit.

Every operational failure derives from :class:`ToolkitError` so the CLI can
map it to a single-line diagnostic and exit status 1.
"""


class ToolkitError(Exception):
    """Base class for all operational errors raised by this package."""


# -- atomic data ------------------------------------------------------------

class UnknownIsotope(ToolkitError):
    """The (Z, A) pair is not in the supported isotope set."""


class MissingLevel(ToolkitError):
    """A level query fell outside the provider's coverage."""


class MissingTransition(ToolkitError):
    """A transition query fell outside the provider's coverage."""


class NotUpward(ToolkitError):
    """Transition requested with E(upper) <= E(lower)."""


class ParseError(ToolkitError):
    """Malformed input file (carries a line number when available)."""


class VersionMismatch(ToolkitError):
    """File header declares an unsupported format version."""


# -- physics ----------------------------------------------------------------

class NonPositiveInput(ToolkitError):
    """Frequency or temperature argument must be strictly positive."""


class DegenerateSystem(ToolkitError):
    """Steady-state rate equations have no unique solution (all rates zero)."""


class SingularDenominator(ToolkitError):
    """A closed-form expression was evaluated at a pole."""


class GainThreshold(ToolkitError):
    """Line-center brightness is undefined: the medium is not absorbing."""


class GainRegime(ToolkitError):
    """Stimulated emission exceeds absorption; black-body saturation fails."""


class NonPositiveBrightness(ToolkitError):
    """Output temperature is undefined for b <= 0."""


class InvalidFrequencies(ToolkitError):
    """Frequency ordering constraint violated (requires omega13 > omega23)."""


# -- dataset generation -----------------------------------------------------

class ExhaustedAttempts(ToolkitError):
    """Rejection sampling failed to produce a valid candidate."""


class EmptyDataset(ToolkitError):
    """Operation requires at least one record."""


class UnknownColumn(ToolkitError):
    """Requested column is not part of the dataset schema."""


# -- neural network ---------------------------------------------------------

class BadShape(ToolkitError):
    """Layer size list does not describe a valid network."""


class ShapeMismatch(ToolkitError):
    """Array arguments have incompatible shapes."""


class NonFiniteInput(ToolkitError):
    """Input vector contains NaN or infinity."""


class Divergence(ToolkitError):
    """Training loss became non-finite or ran away."""


# -- fitting ----------------------------------------------------------------

class IllConditioned(ToolkitError):
    """Fit problem is degenerate (e.g. constant data)."""
