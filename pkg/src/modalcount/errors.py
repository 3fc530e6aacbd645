"""Exception types shared by the library and mapped to CLI exit statuses."""


class ModalCountError(Exception):
    exit_status = 1


class InputError(ModalCountError, ValueError):
    """Malformed or out-of-range input."""

    exit_status = 2


class LimitError(ModalCountError):
    """A computation would exceed a configured size or budget."""

    exit_status = 3


class ConsistencyError(ModalCountError, ArithmeticError):
    """Two routes to the same value disagreed, or a numerical check failed."""

    exit_status = 4
