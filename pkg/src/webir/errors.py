"""Exception hierarchy shared by all pipeline stages."""


class WebIRError(Exception):
    """Base class for every error raised by this package."""


class FormatError(WebIRError, ValueError):
    """Malformed input text. ``line`` is the 1-based line number, if known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownSeedError(WebIRError, KeyError):
    def __str__(self):
        return f"unknown seed: {self.args[0]!r}"


class UnknownNodeError(WebIRError, KeyError):
    def __str__(self):
        return f"unknown node(s): {self.args[0]!r}"


class EmptyGraphError(WebIRError, ValueError):
    pass


class EmptySubgraphError(WebIRError, ValueError):
    pass


class WindowMismatchError(WebIRError, ValueError):
    pass


class UndefinedResemblanceError(WebIRError, ValueError):
    pass


class EmptyCorpusError(WebIRError, ValueError):
    pass


class EmptyQueryError(WebIRError, ValueError):
    pass


class UndefinedRecallError(WebIRError, ValueError):
    pass


class DuplicateJudgmentError(FormatError):
    pass


class ConfigError(WebIRError, ValueError):
    pass
