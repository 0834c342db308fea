"""Exception hierarchy shared by every module."""


class SyncPlanarError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 2


class ValidationError(SyncPlanarError, ValueError):
    exit_code = 2


class MissingTransition(ValidationError):
    def __init__(self, state, letter):
        self.state, self.letter = state, letter
        super().__init__(f"missing transition for state {state}, letter {letter!r}")


class DuplicateTransition(ValidationError):
    def __init__(self, state, letter):
        self.state, self.letter = state, letter
        super().__init__(f"duplicate transition for state {state}, letter {letter!r}")


class IndexOutOfRange(ValidationError):
    def __init__(self, state, letter, detail=""):
        self.state, self.letter = state, letter
        msg = f"index out of range at state {state}, letter {letter!r}"
        super().__init__(msg + (f": {detail}" if detail else ""))


class ParseError(ValidationError):
    pass


class EmptyCnf(ValidationError):
    pass


class DrawingInvalid(ValidationError):
    pass


class CapError(SyncPlanarError):
    """A desk-scale cap or search budget was hit."""

    exit_code = 3


class ExactCapExceeded(CapError):
    pass


class BudgetExceeded(CapError):
    pass


class TooManyVariables(CapError):
    pass


class CrossingBudgetExceeded(CapError):
    pass


class DegenerateLayout(CapError):
    pass


class NotSynchronizing(SyncPlanarError):
    pass


class SubsetNotSynchronizable(SyncPlanarError):
    pass
