"""Arithmetic in the convolution ring R = Z[X]/(X^n - 1).

A ring element is a 1-D ``int64`` numpy array of length ``n``; index ``i``
holds the coefficient of ``X**i``. Every function here is pure and never
mutates its arguments.
"""
from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, NotInvertibleError, ParameterError

Poly = np.ndarray
PolyLike = Union[np.ndarray, Sequence[int]]

__all__ = [
    "as_poly",
    "zero",
    "one",
    "monomial",
    "ring_add",
    "ring_sub",
    "ring_mul",
    "ring_mul_schoolbook",
    "ring_scale",
    "reduce_mod",
    "reduce_centered",
    "poly_inverse_mod_prime",
    "poly_inverse_mod_2e",
    "poly_width_inf",
    "poly_l2_norm",
    "is_constant",
    "is_prime",
]


def as_poly(a: PolyLike) -> Poly:
    arr = np.asarray(a)
    if arr.ndim != 1:
        raise DimensionError(f"ring element must be 1-D, got shape {arr.shape}")
    if arr.dtype.kind not in "iub":
        if not np.all(np.mod(arr, 1) == 0):
            raise ParameterError("ring element coefficients must be integers")
    return arr.astype(np.int64, copy=True)


def zero(n: int) -> Poly:
    return np.zeros(n, dtype=np.int64)


def one(n: int) -> Poly:
    e = np.zeros(n, dtype=np.int64)
    e[0] = 1
    return e


def monomial(n: int, degree: int, coeff: int = 1) -> Poly:
    e = np.zeros(n, dtype=np.int64)
    e[degree % n] = coeff
    return e


def _same_n(a: Poly, b: Poly) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"ring degree mismatch: {a.shape[0]} vs {b.shape[0]}")


def ring_add(a: PolyLike, b: PolyLike) -> Poly:
    a, b = as_poly(a), as_poly(b)
    _same_n(a, b)
    return a + b


def ring_sub(a: PolyLike, b: PolyLike) -> Poly:
    a, b = as_poly(a), as_poly(b)
    _same_n(a, b)
    return a - b


def ring_scale(a: PolyLike, s: int) -> Poly:
    return as_poly(a) * int(s)


def ring_mul(a: PolyLike, b: PolyLike) -> Poly:
    """Cyclic convolution of ``a`` and ``b``, exact over the integers."""
    a, b = as_poly(a), as_poly(b)
    _same_n(a, b)
    n = a.shape[0]
    # np.convolve on int64 is a direct (non-FFT) sum, so it stays exact.
    full = np.convolve(a, b)
    out = full[:n].copy()
    out[: n - 1] += full[n:]
    return out


def ring_mul_schoolbook(a: PolyLike, b: PolyLike) -> Poly:
    """Reference convolution: an explicit n*n double loop in pure Python.

    Slow on purpose. It is the oracle for :func:`ring_mul` and the cost
    model the benchmark measures (one call == n**2 multiply-adds).
    """
    a, b = as_poly(a), as_poly(b)
    _same_n(a, b)
    n = len(a)
    xs, ys = a.tolist(), b.tolist()
    out = [0] * n
    for i in range(n):
        ai = xs[i]
        for j in range(n):
            t = i + j
            if t >= n:
                t -= n
            out[t] += ai * ys[j]
    return np.array(out, dtype=np.int64)


def _check_modulus(m: int) -> int:
    m = int(m)
    if m < 2:
        raise ParameterError(f"modulus must be >= 2, got {m}")
    return m


def reduce_mod(a: PolyLike, m: int) -> Poly:
    """Coefficients replaced by their residues in ``[0, m)``."""
    m = _check_modulus(m)
    return np.mod(as_poly(a), m)


def reduce_centered(a: PolyLike, m: int) -> Poly:
    """Coefficients replaced by residues in ``(-m/2, m/2]``.

    For even ``m`` the value ``+m/2`` is kept and ``-m/2`` is mapped to it;
    for odd ``m`` the window is ``[-(m-1)/2, (m-1)/2]``.
    """
    m = _check_modulus(m)
    r = np.mod(as_poly(a), m)
    r[r > m // 2] -= m
    return r


# -- polynomial arithmetic over F_p[X] (dense, ascending, trimmed) ---------


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def _pmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return a[:0]
    return _trim(np.mod(np.convolve(a, b), p))


def _psub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    size = max(a.size, b.size)
    out = np.zeros(size, dtype=np.int64)
    out[: a.size] += a
    out[: b.size] -= b
    return _trim(np.mod(out, p))


def _pdivmod(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    db = b.size - 1
    if a.size - 1 < db:
        return a[:0], a
    inv_lead = pow(int(b[-1]), -1, p)
    r = a.copy()
    quo = np.zeros(a.size - db, dtype=np.int64)
    for i in range(a.size - 1 - db, -1, -1):
        coef = (int(r[i + db]) * inv_lead) % p
        if coef:
            quo[i] = coef
            r[i : i + db + 1] = np.mod(r[i : i + db + 1] - coef * b, p)
    return _trim(quo), _trim(r)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, math.isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


def poly_inverse_mod_prime(a: PolyLike, prime: int) -> Poly:
    """Inverse of ``a`` in F_prime[X]/(X^n - 1) by the extended Euclidean
    algorithm against ``X^n - 1``.

    Raises:
        NotInvertibleError: if ``gcd(a, X^n - 1)`` is not a unit mod ``prime``.
    """
    prime = int(prime)
    if not is_prime(prime):
        raise ParameterError(f"{prime} is not prime")
    a = as_poly(a)
    n = a.size
    modulus = np.zeros(n + 1, dtype=np.int64)
    modulus[0], modulus[n] = prime - 1, 1
    r0, r1 = modulus, _trim(np.mod(a, prime))
    s0, s1 = np.zeros(0, dtype=np.int64), np.ones(1, dtype=np.int64)
    while r1.size:
        quo, rem = _pdivmod(r0, r1, prime)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(s0, _pmul(quo, s1, prime), prime)
    if r0.size != 1:
        raise NotInvertibleError(f"polynomial is not invertible mod {prime}")
    inv = np.mod(s0 * pow(int(r0[0]), -1, prime), prime)
    out = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(inv):
        out[i % n] += c
    return np.mod(out, prime)


def poly_inverse_mod_2e(a: PolyLike, e: int) -> Poly:
    """Inverse of ``a`` modulo ``2**e``: invert mod 2, then Newton-lift
    ``b <- b * (2 - a*b)``, doubling the exponent each round."""
    e = int(e)
    if e < 1:
        raise ParameterError(f"exponent must be >= 1, got {e}")
    target = 1 << e
    a = np.mod(as_poly(a), target)
    b = poly_inverse_mod_prime(a, 2)
    two = 2 * one(a.size)
    mod = 2
    while mod < target:
        mod = min(mod * mod, target)
        b = np.mod(ring_mul(b, np.mod(two - ring_mul(a, b), mod)), mod)
    return b


def poly_width_inf(a: PolyLike) -> int:
    """Largest coefficient minus smallest coefficient."""
    a = as_poly(a)
    if a.size == 0:
        return 0
    return int(a.max() - a.min())


def poly_l2_norm(a: PolyLike) -> float:
    """Plain (uncentered) Euclidean norm of the coefficient vector."""
    a = as_poly(a)
    return math.sqrt(int(np.dot(a, a)))


def is_constant(a: PolyLike) -> bool:
    """True when all coefficients are equal."""
    return poly_width_inf(a) == 0
