"""Exception hierarchy shared by every quct module."""


class QuctError(Exception):
    """Base class for all library errors."""


class ParseError(QuctError, ValueError):
    pass


class NotPrimePower(ParseError):
    pass


class IndexOutOfRange(QuctError, IndexError):
    pass


class SizeCapExceeded(QuctError):
    pass


class EvenCharacteristicUnsupported(QuctError):
    pass


class UnsupportedRingClass(QuctError):
    """The ring has no closed-form spectrum here (even residue order,
    or two or more local factors with residue order 3 mod 4)."""


class WrongClassification(QuctError, ValueError):
    pass


class OverlappingSets(QuctError, ValueError):
    pass


class PrecisionLoss(QuctError, ArithmeticError):
    pass


class LoopsPresent(QuctError, ValueError):
    pass


class NoConvergence(QuctError, ArithmeticError):
    pass


class CardinalityMismatch(QuctError, ValueError):
    pass


class NonIntegerResult(QuctError, ArithmeticError):
    pass


class Disconnected(QuctError, ValueError):
    pass
