"""Exception hierarchy shared by every module of the package."""


class DessyncError(Exception):
    """Base class for all errors raised by dessync."""


class ModelError(DessyncError, ValueError):
    """Malformed plant, architecture or model file (unknown names, bad kappa, ...)."""


class NotInLanguageError(ModelError):
    """A string was replayed that the plant cannot generate from its initial states."""


class FixtureError(ModelError):
    """A golden fact does not hold on the model it was checked against."""

    def __init__(self, fact, detail):
        self.fact = fact
        super().__init__(f"golden fact {fact.name!r} failed: {detail}")


class UsageError(DessyncError, ValueError):
    """An operation was called outside its domain (event not observable, tau not critical, ...)."""


class UndefinedTransitionError(UsageError):
    """The absorbing transition was applied to a critical SI-state."""


class CorruptedStateError(DessyncError, ValueError):
    """An SI-state has a component longer than its site's threshold."""
