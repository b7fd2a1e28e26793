"""Exception hierarchy shared by every module.

The CLI reports ``type(exc).__name__`` verbatim, so class names are part of
the user-facing surface.
"""


class EgJohnsonError(Exception):
    """Base class for all library errors."""


# words
class WordSyntaxError(EgJohnsonError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGenerator(EgJohnsonError, KeyError):
    def __init__(self, name: str, position: int | None = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown generator {name!r}{where}")
        self.name = name
        self.position = position

    def __str__(self) -> str:
        return self.args[0]


class AlphabetMismatch(EgJohnsonError, ValueError):
    pass


class MissingWitness(EgJohnsonError, ValueError):
    pass


# tensor
class CapMismatch(EgJohnsonError, ValueError):
    pass


class RingMismatch(EgJohnsonError, ValueError):
    pass


class RingNotRational(EgJohnsonError, ValueError):
    pass


class BadConstantTerm(EgJohnsonError, ValueError):
    pass


# freelie
class CapTooSmall(EgJohnsonError, ValueError):
    pass


class NotALieElement(EgJohnsonError, ValueError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class NotHomogeneous(EgJohnsonError, ValueError):
    pass


# series
class DegreeTooLow(EgJohnsonError, ValueError):
    pass


# eglie
class StructureMismatch(EgJohnsonError, ValueError):
    pass


class IncompatiblePair(EgJohnsonError, ValueError):
    pass


# johnson / formal
class NotAnAutomorphism(EgJohnsonError, ValueError):
    pass


class NotUnipotent(EgJohnsonError, ValueError):
    pass


class InversionFailure(EgJohnsonError, ArithmeticError):
    pass
