"""Byte strings <-> plaintext matrices (p = 3 only).

The byte stream is a 32-bit little-endian length followed by the message.
Each byte becomes six base-3 digits, least significant first, with digit
2 written as -1. Digits fill the matrix entry by entry (row-major) and,
within an entry, by ascending degree. A block holds floor(n k^2 / 6) bytes;
unused slots are zero.
"""
from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

from .errors import DecodeError, EncodingError
from .params import Params

TRITS_PER_BYTE = 6
_PREFIX = struct.Struct("<I")

# byte value -> six digits in {-1, 0, 1}
_DIGITS = np.array(
    [[((b // 3**i) % 3 + 1) % 3 - 1 for i in range(TRITS_PER_BYTE)] for b in range(256)],
    dtype=np.int64,
)
_WEIGHTS = 3 ** np.arange(TRITS_PER_BYTE, dtype=np.int64)


def block_capacity(params: Params) -> int:
    """Message bytes carried by one plaintext block."""
    return params.coeff_count // TRITS_PER_BYTE


def _check(params: Params) -> int:
    if params.p != 3:
        raise EncodingError(f"trit encoding needs p = 3, got p = {params.p}")
    cap = block_capacity(params)
    if cap == 0:
        raise EncodingError(f"n k^2 = {params.coeff_count} is too small to hold one byte")
    return cap


def encode_message(data: bytes, params: Params) -> list[np.ndarray]:
    cap = _check(params)
    if len(data) >= 2**32:
        raise EncodingError("message too long for a 32-bit length prefix")
    stream = _PREFIX.pack(len(data)) + bytes(data)
    shape = (params.k, params.k, params.n)
    blocks = []
    for start in range(0, len(stream), cap):
        chunk = np.frombuffer(stream[start : start + cap], dtype=np.uint8)
        flat = np.zeros(params.coeff_count, dtype=np.int64)
        digits = _DIGITS[chunk].ravel()
        flat[: digits.size] = digits
        blocks.append(flat.reshape(shape))
    return blocks


def decode_message(blocks: Sequence[np.ndarray] | Iterable[np.ndarray], params: Params) -> bytes:
    cap = _check(params)
    used = cap * TRITS_PER_BYTE
    raw = bytearray()
    for block in blocks:
        flat = np.asarray(block, dtype=np.int64).ravel()
        if flat.size != params.coeff_count:
            raise DecodeError(f"block has {flat.size} coefficients, expected {params.coeff_count}")
        if flat.size and (flat.min() < -1 or flat.max() > 1):
            raise DecodeError("digit outside {-1, 0, 1}")
        digits = np.mod(flat[:used], 3).reshape(cap, TRITS_PER_BYTE)
        values = digits @ _WEIGHTS
        if values.max(initial=0) > 255:
            raise DecodeError("digit group does not encode a byte")
        raw.extend(values.astype(np.uint8).tobytes())
    if not raw:
        return b""
    if len(raw) < _PREFIX.size:
        raise DecodeError("stream shorter than the length prefix")
    (length,) = _PREFIX.unpack_from(raw)
    if length > len(raw) - _PREFIX.size:
        raise DecodeError(f"length prefix {length} exceeds the {len(raw) - _PREFIX.size} bytes present")
    return bytes(raw[_PREFIX.size : _PREFIX.size + length])
