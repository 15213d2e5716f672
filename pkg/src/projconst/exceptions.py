"""Exception hierarchy for projconst."""


class ProjConstError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(ProjConstError, ValueError):
    pass


class DomainError(ProjConstError, ValueError):
    pass


class RankError(ProjConstError, ValueError):
    pass


class ConvergenceError(ProjConstError, RuntimeError):
    pass


class NotTightError(ProjConstError, ValueError):
    pass


class NotParsevalError(NotTightError):
    pass


class ZeroColumnError(ProjConstError, ValueError):
    pass


class NotEtfError(ProjConstError, ValueError):
    pass


class UnsupportedError(ProjConstError, ValueError):
    pass


class NotTwoGraphError(ProjConstError, ValueError):
    pass


class FactorizationError(ProjConstError, RuntimeError):
    pass


class PrecisionError(ProjConstError, OverflowError):
    pass


class EmptyFrameError(ProjConstError, ValueError):
    pass


class TooLargeError(ProjConstError, MemoryError):
    pass


class SearchExhaustedError(ProjConstError, RuntimeError):
    """The SIC search ran out of starts; ``fiducial`` holds the best candidate."""

    def __init__(self, msg, fiducial=None):
        super().__init__(msg)
        self.fiducial = fiducial


class FormatError(ProjConstError, ValueError):
    """Malformed input file. ``lineno`` is 1-based, or None for whole-file errors."""

    def __init__(self, msg, lineno=None):
        if lineno is not None:
            msg = f"line {lineno}: {msg}"
        super().__init__(msg)
        self.lineno = lineno
