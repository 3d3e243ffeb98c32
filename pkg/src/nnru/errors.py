"""Exception hierarchy shared by every nnru module."""


class NNRUError(Exception):
    """Base class for all library errors."""


class DimensionError(NNRUError, ValueError):
    pass


class ParameterError(NNRUError, ValueError):
    pass


class NotInvertibleError(NNRUError, ArithmeticError):
    pass


class KeygenError(NNRUError):
    """Rejection sampling ran out of retries."""


class EncodingError(NNRUError, ValueError):
    pass


class DecodeError(NNRUError, ValueError):
    pass


class FormatError(NNRUError, ValueError):
    """Malformed key or ciphertext bytes."""


class MismatchError(NNRUError, ValueError):
    """Parameters of two objects that must agree do not."""


class SearchSpaceError(NNRUError):
    pass


class AttackInapplicableError(NNRUError):
    pass
