"""Binary key and ciphertext files.

Layout (all integers little-endian)::

    b"NNRU"  version:u8=1  type:u8  n:u32 k:u32 p:u32 q:u32  payload

type 0x01 public key   payload h, H
type 0x02 private key  payload f, g, c, C_p, G_p
type 0x03 ciphertext   payload count:u32 then count matrices e

A matrix is k*k polynomials in row-major order, each polynomial n
coefficients by ascending degree, each coefficient a u16 non-negative
residue: mod q for h, H, e, f, g, c and mod p for C_p, G_p.
"""
from __future__ import annotations

import struct
from typing import Optional, Union

import numpy as np

from .errors import FormatError, MismatchError
from .params import Params, find_preset
from .scheme import Ciphertext, PrivateKey, PublicKey

MAGIC = b"NNRU"
VERSION = 1
TYPE_PUBLIC, TYPE_PRIVATE, TYPE_CIPHERTEXT = 1, 2, 3

_HEADER = struct.Struct("<4sBBIIII")
_COUNT = struct.Struct("<I")
_COEFF = np.dtype("<u2")


def _header(kind: int, params: Params) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, kind, params.n, params.k, params.p, params.q)


def _pack(M: np.ndarray, modulus: int) -> bytes:
    return np.mod(M, modulus).astype(_COEFF).tobytes()


def dumps_public_key(pub: PublicKey) -> bytes:
    q = pub.params.q
    return _header(TYPE_PUBLIC, pub.params) + _pack(pub.h, q) + _pack(pub.H, q)


def dumps_private_key(priv: PrivateKey) -> bytes:
    p, q = priv.params.p, priv.params.q
    body = b"".join(_pack(M, q) for M in (priv.f, priv.g, priv.c))
    body += _pack(priv.C_p, p) + _pack(priv.G_p, p)
    return _header(TYPE_PRIVATE, priv.params) + body


def dumps_ciphertexts(blocks: list[Ciphertext], params: Params) -> bytes:
    out = [_header(TYPE_CIPHERTEXT, params), _COUNT.pack(len(blocks))]
    for ct in blocks:
        if ct.params.shape_key != params.shape_key:
            raise MismatchError("ciphertext blocks disagree on parameters")
        out.append(_pack(ct.e, params.q))
    return b"".join(out)


def resolve_params(n: int, k: int, p: int, q: int, params: Optional[Params] = None) -> Params:
    """Attach full parameters to a header that only records (n, k, p, q)."""
    if params is not None:
        if params.shape_key != (n, k, p, q):
            raise MismatchError(f"file has (n,k,p,q)={(n, k, p, q)}, expected {params.shape_key}")
        return params
    preset = find_preset(n, k, p, q)
    if preset is None:
        raise MismatchError(
            f"(n,k,p,q)={(n, k, p, q)} matches no preset; supply the full parameter set"
        )
    return preset


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.pos = 0

    def take(self, size: int) -> memoryview:
        if self.pos + size > len(self.data):
            raise FormatError(f"truncated input: need {size} bytes at offset {self.pos}")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def matrix(self, k: int, n: int, modulus: int, centered: bool = False) -> np.ndarray:
        raw = np.frombuffer(self.take(k * k * n * _COEFF.itemsize), dtype=_COEFF)
        M = raw.astype(np.int64).reshape(k, k, n)
        if M.size and M.max() >= modulus:
            raise FormatError(f"coefficient {int(M.max())} out of range mod {modulus}")
        if centered:
            M[M > modulus // 2] -= modulus
        return M

    def done(self) -> None:
        if self.pos != len(self.data):
            raise FormatError(f"{len(self.data) - self.pos} trailing bytes")


def loads(data: bytes, params: Optional[Params] = None) -> Union[PublicKey, PrivateKey, list[Ciphertext]]:
    """Parse any NNRU file. Ciphertext files yield a list of blocks.

    Raises:
        FormatError: bad magic, version, object type, length or coefficient.
        MismatchError: header disagrees with ``params`` or matches no preset.
    """
    r = _Reader(bytes(data))
    magic, version, kind, n, k, p, q = _HEADER.unpack(r.take(_HEADER.size))
    if magic != MAGIC:
        raise FormatError(f"bad magic {bytes(magic)!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if kind not in (TYPE_PUBLIC, TYPE_PRIVATE, TYPE_CIPHERTEXT):
        raise FormatError(f"unknown object type {kind:#04x}")
    if n == 0 or k == 0 or p < 2 or q < 2:
        raise FormatError(f"degenerate header n={n} k={k} p={p} q={q}")
    params = resolve_params(n, k, p, q, params)

    if kind == TYPE_PUBLIC:
        h = r.matrix(k, n, q)
        H = r.matrix(k, n, q)
        r.done()
        return PublicKey(h, H, params)
    if kind == TYPE_PRIVATE:
        f, g, c = (r.matrix(k, n, q, centered=True) for _ in range(3))
        C_p = r.matrix(k, n, p)
        G_p = r.matrix(k, n, p)
        r.done()
        return PrivateKey(f, g, c, C_p, G_p, params)
    (count,) = _COUNT.unpack(r.take(_COUNT.size))
    blocks = [Ciphertext(r.matrix(k, n, q), params) for _ in range(count)]
    r.done()
    return blocks


def load_file(path, params: Optional[Params] = None):
    with open(path, "rb") as fh:
        return loads(fh.read(), params)


def dump_file(path, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)
