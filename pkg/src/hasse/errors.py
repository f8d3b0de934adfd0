"""Exception hierarchy shared by the engine and the command line front end."""


class HasseError(Exception):
    """Base class for every error raised by this package."""

    kind = "HasseError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.kind = cls.__name__


class InputError(HasseError):
    """Malformed input (bad syntax, invalid parameters)."""


class PreconditionError(HasseError):
    """Well-formed input that violates a mathematical precondition."""


class ParseError(InputError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NotPrime(InputError):
    pass


class OrderMismatch(InputError):
    pass


class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class NotAPthPower(PreconditionError):
    pass


class NonzeroConstantTerm(PreconditionError):
    pass


class NotInvertible(PreconditionError):
    pass


class NotIterative(PreconditionError):
    pass


class TruncationInconclusive(PreconditionError):
    pass


class ConstantWitness(PreconditionError):
    pass


class Inconsistent(PreconditionError):
    pass


class NotNormalizable(PreconditionError):
    pass


class TrivialDerivation(PreconditionError):
    pass
