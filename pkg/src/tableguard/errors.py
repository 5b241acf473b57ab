"""Exception types shared across the engine."""


class TableGuardError(Exception):
    """Base class for every error raised by this package."""


class FormatMismatch(TableGuardError):
    """Input does not have the shape a format-preserving operation requires."""


class InvalidParams(TableGuardError):
    """Strategy or operation parameters are out of range."""


class InvalidInput(TableGuardError):
    """Operation input is unusable (non-finite, empty, wrong shape)."""


class ParseError(TableGuardError):
    """A file could not be parsed; carries path and 1-based line/row number."""

    def __init__(self, message: str, *, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class InsufficientGazetteer(TableGuardError):
    """Surrogate candidate pool has fewer than two records."""


class PolicyGap(TableGuardError):
    """No policy rule matched and the policy rejects unhandled kinds."""

    def __init__(self, kind, column=None):
        self.kind = kind
        self.column = column
        where = f" in column {column!r}" if column else ""
        super().__init__(f"no policy rule for entity kind {kind}{where}")


class LedgerIntegrityError(TableGuardError):
    """Internal consistency violation between a ledger entry and a span."""
