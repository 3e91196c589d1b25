"""Exception hierarchy shared by the library and the CLI."""


class GapError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(GapError, ValueError):
    pass


class ResourceLimitError(GapError):
    """An enumeration or allocation would exceed a configured budget."""


class DegenerateInputError(GapError, ValueError):
    pass


class InternalError(GapError, RuntimeError):
    """A construction produced an object violating its own guarantees."""


class ParseError(GapError, ValueError):
    def __init__(self, message, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}, offset {offset})"
        super().__init__(message + where)
