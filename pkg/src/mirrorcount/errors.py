class MirrorCountError(Exception):
    """Base class for library errors."""


class ValidationError(MirrorCountError, ValueError):
    pass


class BudgetError(MirrorCountError):
    """An enumeration or tower would exceed its configured budget."""

    def __init__(self, message, size=None, budget=None):
        super().__init__(message)
        self.size = size
        self.budget = budget


class TowerTooSmallError(MirrorCountError):
    """The ambient field does not contain a required subfield or root."""


class ConsistencyError(MirrorCountError):
    """An identity that must hold exactly failed; indicates an arithmetic bug."""
