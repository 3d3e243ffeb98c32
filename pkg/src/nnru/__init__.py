"""Public-key encryption over k x k matrices of convolution polynomials."""
from .encoding import decode_message, encode_message
from .errors import (
    AttackInapplicableError,
    DecodeError,
    DimensionError,
    EncodingError,
    FormatError,
    KeygenError,
    MismatchError,
    NNRUError,
    NotInvertibleError,
    ParameterError,
    SearchSpaceError,
)
from .params import PRESETS, Params, get_preset, validate_params
from .scheme import Ciphertext, PrivateKey, PublicKey, decrypt, encrypt, keygen
from .streams import derive_rng

__version__ = "0.1.0"

__all__ = [
    "AttackInapplicableError",
    "Ciphertext",
    "DecodeError",
    "DimensionError",
    "EncodingError",
    "FormatError",
    "KeygenError",
    "MismatchError",
    "NNRUError",
    "NotInvertibleError",
    "PRESETS",
    "ParameterError",
    "Params",
    "PrivateKey",
    "PublicKey",
    "SearchSpaceError",
    "decode_message",
    "decrypt",
    "derive_rng",
    "encode_message",
    "encrypt",
    "get_preset",
    "keygen",
    "validate_params",
]
