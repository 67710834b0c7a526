"""Exception hierarchy for the workbench."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(WorkbenchError):
    """Operands belong to incompatible rings, ideals or charts."""


class ParseError(WorkbenchError):
    """A textual polynomial, field or element could not be parsed."""


class EmptyVarietyError(WorkbenchError):
    """The defining ideal contains 1, so the variety is empty."""


class RankCertificationError(WorkbenchError):
    """No Jacobian minor size could be certified as the rank."""


class SingularChartError(WorkbenchError):
    """The chart minor vanishes at the requested point."""


class PointNotOnVarietyError(WorkbenchError):
    """A generator of the defining ideal does not vanish at the point."""


class NotInvertibleError(WorkbenchError):
    """Series inversion requested for a series with zero constant term."""


class UnsupportedConstructorError(WorkbenchError):
    """A constructor family does not apply to this variety."""


class UnsupportedPresentationError(WorkbenchError):
    """Fiber construction requires a free module presentation."""


class WindowOverflowError(WorkbenchError):
    """A basis index left the configured window; enlarge the window."""

    def __init__(self, index, window):
        super().__init__(f"index {index} outside window [-{window}, {window}]")
        self.index = index
        self.window = window


class AxiomViolationError(WorkbenchError):
    """Validated construction data violates a required axiom.

    Carries a machine-readable witness of the failing instance.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
