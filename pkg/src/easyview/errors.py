"""Exception types raised across the framework."""


class EasyViewError(Exception):
    pass


# observables


class DerivedUpdateError(EasyViewError):
    """Raised when code tries to write to a derived observable."""


class PropagationDepthError(EasyViewError):
    """Raised when nested commits exceed the configured depth guard."""


# backend


class BackendError(EasyViewError):
    pass


class UnknownHandleError(BackendError):
    pass


class DeadParentError(BackendError):
    pass


class DeadWidgetError(BackendError):
    pass


class NotAButtonError(BackendError):
    pass


class UnsupportedWidgetError(BackendError):
    pass


class TerminalUnavailableError(BackendError):
    pass


# views


class EmptyItemsError(EasyViewError):
    pass


# formulas


class FormulaError(EasyViewError):
    pass


class ParseError(FormulaError):
    pass


class UnboundVariableError(FormulaError):
    pass


# scripts


class ScriptError(EasyViewError):
    """A script line could not be parsed or resolved against the live tree."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
