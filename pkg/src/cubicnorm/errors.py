"""Exception types shared across the library."""


class CubicNormError(Exception):
    """Base class for all library errors."""


class SpecMismatch(CubicNormError):
    """Two operands live over different rings."""


class NotAUnit(CubicNormError):
    """Inversion was requested for a non-invertible element."""


class NameClash(CubicNormError):
    """A scalar extension re-used an existing variable name."""


class MissingAssignment(CubicNormError):
    """An evaluation homomorphism left a variable unassigned."""


class ExtensionMismatch(CubicNormError):
    """An element does not live over an extension of the expected ring."""


class BadSplit(CubicNormError):
    """Invalid (k, l) split for a linearization."""


class NotQuadratic(CubicNormError):
    """Polarization was requested for a non-quadratic law."""


class ShapeMismatch(CubicNormError):
    """Two polynomial laws have different source/target/degree."""


class PreconditionViolated(CubicNormError):
    """A check was invoked on an instance that fails its precondition."""


class UnknownTag(CubicNormError):
    """Unknown builtin-instance tag."""


class AxiomFailure(CubicNormError):
    """A construction requires axioms that do not hold."""


class BadRoot(CubicNormError):
    """A root label outside the expected set."""


class BadComponent(CubicNormError):
    """A module element was supplied for the wrong grading component."""


class BadOrder(CubicNormError):
    """Root factors supplied out of canonical order."""


class BadMode(CubicNormError):
    """Invalid scalar-action mode."""


class ConstraintViolated(CubicNormError):
    """A group-element constraint fails."""


class NotSplit(CubicNormError):
    """An operation requires a split etale algebra."""


class ParseError(CubicNormError):
    """Malformed configuration or polynomial string."""


class ValidationError(CubicNormError):
    """An instance failed eager validation; carries the witness report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnknownSuite(CubicNormError):
    """Unknown verification suite name."""
