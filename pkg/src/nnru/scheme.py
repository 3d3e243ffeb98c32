"""NNRU key generation, encryption and decryption.

Keys and ciphertexts live in M = M_k(Z)[X]/(X^n - I):

    h = w G_q (mod q),   H = F_q c (mod q)
    e = p phi h + H m (mod q)
    A = f e g centered mod q,  B = A mod p,  m = C_p B G_p centered mod p

There is no integrity protection on ciphertexts; do not use this for
anything real.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import EncodingError, KeygenError, MismatchError, NotInvertibleError, ParameterError
from .matrix import (
    Matrix,
    as_matrix,
    mat_inverse_mod_2e,
    mat_inverse_mod_prime,
    mat_mul,
    mat_reduce,
    zero_matrix,
)
from .params import Params, validate_params

DEFAULT_RETRIES = 100

__all__ = [
    "sample_ternary",
    "sample_matrix",
    "sample_key_matrix",
    "sample_message",
    "PublicKey",
    "PrivateKey",
    "Ciphertext",
    "keygen",
    "encrypt",
    "decrypt",
    "check_plaintext",
    "recover_w",
    "exact_b",
    "DEFAULT_RETRIES",
]


def sample_ternary(n: int, d1: int, d2: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of L(d1, d2): d1 coefficients +1, d2 coefficients -1."""
    if d1 < 0 or d2 < 0 or d1 + d2 > n:
        raise ParameterError(f"cannot place {d1} ones and {d2} minus-ones in {n} slots")
    out = np.zeros(n, dtype=np.int64)
    pos = rng.choice(n, size=d1 + d2, replace=False)
    out[pos[:d1]] = 1
    out[pos[d1:]] = -1
    return out


def sample_matrix(k: int, n: int, d: int, rng: np.random.Generator) -> Matrix:
    """k*k independent entries from L(d, d)."""
    out = zero_matrix(k, n)
    for i in range(k):
        for j in range(k):
            out[i, j] = sample_ternary(n, d, d, rng)
    return out


def sample_key_matrix(k: int, n: int, d: int, rng: np.random.Generator) -> Matrix:
    """Ternary key matrix that can be invertible.

    A matrix whose entries all lie in L(d, d) evaluates to the zero matrix
    at X = 1 and so has no inverse modulo anything. Diagonal entries are
    therefore drawn from L(d, d - 1), making the value at X = 1 the identity;
    off-diagonal entries stay in L(d, d). With ``d == 0`` the zero matrix is
    returned.
    """
    out = sample_matrix(k, n, d, rng)
    if d > 0:
        for i in range(k):
            out[i, i] = sample_ternary(n, d, d - 1, rng)
    return out


def sample_message(params: Params, rng: np.random.Generator) -> Matrix:
    half = (params.p - 1) // 2
    shape = (params.k, params.k, params.n)
    return rng.integers(-half, half + 1, size=shape, dtype=np.int64)


def _arrays_equal(a, b) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a, b))


@dataclass(eq=False)
class PublicKey:
    h: Matrix
    H: Matrix
    params: Params

    def __eq__(self, other):
        if not isinstance(other, PublicKey):
            return NotImplemented
        return self.params.shape_key == other.params.shape_key and _arrays_equal(
            (self.h, self.H), (other.h, other.H)
        )


@dataclass(eq=False)
class PrivateKey:
    f: Matrix
    g: Matrix
    c: Matrix
    C_p: Matrix
    G_p: Matrix
    params: Params

    def __eq__(self, other):
        if not isinstance(other, PrivateKey):
            return NotImplemented
        return self.params.shape_key == other.params.shape_key and _arrays_equal(
            (self.f, self.g, self.c, self.C_p, self.G_p),
            (other.f, other.g, other.c, other.C_p, other.G_p),
        )


@dataclass(eq=False)
class Ciphertext:
    e: Matrix
    params: Params

    def __eq__(self, other):
        if not isinstance(other, Ciphertext):
            return NotImplemented
        return self.params.shape_key == other.params.shape_key and np.array_equal(self.e, other.e)


def _sample_until(label, params, d, rng, retries, invert):
    for _ in range(retries):
        candidate = sample_key_matrix(params.k, params.n, d, rng)
        try:
            return candidate, invert(candidate)
        except NotInvertibleError:
            continue
    raise KeygenError(f"no invertible {label} after {retries} draws (n={params.n}, k={params.k}, d={d})")


def keygen(params: Params, rng: np.random.Generator, retries: int = DEFAULT_RETRIES):
    """Generate ``(PublicKey, PrivateKey)``.

    f must be invertible mod q, g mod q and mod p, c mod p; w needs no
    inverse. Each is resampled up to ``retries`` times.

    Raises:
        KeygenError: a matrix stayed non-invertible for ``retries`` draws.
    """
    validate_params(params)
    p, q, e = params.p, params.q, params.q_exponent

    f, F_q = _sample_until("f", params, params.d_f, rng, retries, lambda m: mat_inverse_mod_2e(m, e))
    g, (G_q, G_p) = _sample_until(
        "g", params, params.d_f, rng, retries,
        lambda m: (mat_inverse_mod_2e(m, e), mat_inverse_mod_prime(m, p)),
    )
    c, C_p = _sample_until("c", params, params.d_c, rng, retries, lambda m: mat_inverse_mod_prime(m, p))
    w = sample_key_matrix(params.k, params.n, params.d_w, rng)

    h = mat_reduce(mat_mul(w, G_q), q)
    H = mat_reduce(mat_mul(F_q, c), q)
    return PublicKey(h, H, params), PrivateKey(f, g, c, C_p, G_p, params)


def check_plaintext(m, params: Params) -> Matrix:
    m = as_matrix(m)
    if m.shape != (params.k, params.k, params.n):
        raise EncodingError(f"plaintext shape {m.shape} != {(params.k, params.k, params.n)}")
    half = (params.p - 1) // 2
    if m.size and (m.min() < -half or m.max() > half):
        raise EncodingError(f"plaintext coefficients must lie in [-{half}, {half}]")
    return m


def encrypt(
    pub: PublicKey,
    m,
    rng: Optional[np.random.Generator] = None,
    *,
    phi: Optional[Matrix] = None,
    product: Callable[[Matrix, Matrix], Matrix] = mat_mul,
) -> Ciphertext:
    """e = p*phi*h + H*m (mod q) with a fresh blinding matrix phi.

    ``phi`` may be passed explicitly for tests and attack harnesses; otherwise
    it is drawn from ``rng``. ``product`` swaps in another matrix
    multiplication (the benchmark uses this).
    """
    params = pub.params
    m = check_plaintext(m, params)
    if phi is None:
        if rng is None:
            raise ParameterError("encrypt needs an rng unless phi is given")
        phi = sample_matrix(params.k, params.n, params.d_phi, rng)
    phi = as_matrix(phi)
    e = params.p * product(phi, pub.h) + product(pub.H, m)
    return Ciphertext(mat_reduce(e, params.q), params)


def decrypt(
    priv: PrivateKey,
    ct: Ciphertext,
    *,
    product: Callable[[Matrix, Matrix], Matrix] = mat_mul,
) -> Matrix:
    """Recover the plaintext matrix.

    Decryption cannot detect a failure: when B = p f phi w + c m g leaves the
    centered window mod q the output is a valid-looking but wrong plaintext.
    """
    params = priv.params
    if ct.params.shape_key != params.shape_key:
        raise MismatchError(f"ciphertext params {ct.params.shape_key} != key params {params.shape_key}")
    p, q = params.p, params.q
    fe = mat_reduce(product(priv.f, ct.e), q)
    A = mat_reduce(product(fe, priv.g), q, centered=True)
    B = mat_reduce(A, p)
    C = product(mat_reduce(product(priv.C_p, B), p), priv.G_p)
    return mat_reduce(C, p, centered=True)


def recover_w(pub: PublicKey, priv: PrivateKey) -> Matrix:
    """w = h g, centered mod q (exact because w is ternary)."""
    return mat_reduce(mat_mul(pub.h, priv.g), pub.params.q, centered=True)


def exact_b(pub: PublicKey, priv: PrivateKey, phi: Matrix, m: Matrix) -> Matrix:
    """The integer matrix p f phi w + c m g, before any reduction."""
    p = pub.params.p
    w = recover_w(pub, priv)
    return p * mat_mul(mat_mul(priv.f, phi), w) + mat_mul(mat_mul(priv.c, m), priv.g)
