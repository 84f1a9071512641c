"""Exception hierarchy shared by every module in the package."""


class CacError(Exception):
    """Base class; ``category`` is what the CLI prints on failure."""

    category = "Error"
    exit_code = 1


class InvalidInput(CacError, ValueError):
    category = "InvalidInput"
    exit_code = 2


class NumericalFailure(CacError, ArithmeticError):
    category = "NumericalFailure"
    exit_code = 3


class DegenerateData(CacError, ValueError):
    category = "DegenerateData"
    exit_code = 4


class GenerationFailure(CacError, RuntimeError):
    category = "GenerationFailure"
    exit_code = 5


class ParseError(CacError, ValueError):
    """Malformed dataset file. ``path`` and ``line`` locate the problem."""

    category = "ParseError"
    exit_code = 6

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
