"""Exception types raised across the package."""


class FairStreamError(Exception):
    """Base class for all package errors."""


class InvalidItemError(FairStreamError, KeyError):
    pass


class DuplicateItemError(FairStreamError, ValueError):
    pass


class InfeasibleBudgetError(FairStreamError, ValueError):
    """Budgets cannot be met by the group sizes (or k exceeds n)."""

    def __init__(self, message, groups=()):
        super().__init__(message)
        self.groups = tuple(groups)


class ReplayUnsupportedError(FairStreamError, RuntimeError):
    pass


class InstanceTooLargeError(FairStreamError, ValueError):
    pass


class DataFormatError(FairStreamError, ValueError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line
