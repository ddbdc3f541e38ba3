"""Exception hierarchy shared by all modules."""


class PolycentralError(Exception):
    """Base class for errors raised by this package."""


class InconsistentPresentation(PolycentralError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AlgebraMismatch(PolycentralError):
    pass


class InvalidRewriteSystem(PolycentralError):
    pass


class NotAUnit(PolycentralError):
    pass


class GradedCheckFailed(PolycentralError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ScheduleError(PolycentralError):
    """A weight schedule violates its layering contract."""


class KTooSmall(ScheduleError):
    pass


class NotAFinitePGroup(ScheduleError):
    pass


class CentralizingConditionViolated(PolycentralError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PowerValueMismatch(PolycentralError):
    pass


class PrimeMismatch(PolycentralError):
    pass


class BuildError(PolycentralError):
    """An extension step failed; ``level`` names the generator being added."""

    def __init__(self, message, level=None, cause=None):
        super().__init__(message)
        self.level = level
        self.cause = cause


class AxiomViolated(PolycentralError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IdentityElement(PolycentralError):
    pass


class ExceedsCutoff(PolycentralError):
    pass


class ParseError(PolycentralError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message
