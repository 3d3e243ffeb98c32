"""The matrix ring M = M_k(Z)[X]/(X^n - I).

An element is an ``int64`` array of shape ``(k, k, n)``: entry ``[i, j]`` is
a ring element of :mod:`nnru.ring`. Multiplication is noncommutative for
``k >= 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ring
from .errors import DimensionError, NotInvertibleError, ParameterError

Matrix = np.ndarray
RingMul = Callable[[np.ndarray, np.ndarray], np.ndarray]

__all__ = [
    "MulCounter",
    "as_matrix",
    "zero_matrix",
    "identity_matrix",
    "scalar_matrix",
    "mat_add",
    "mat_sub",
    "mat_mul",
    "mat_mul_strassen",
    "mat_reduce",
    "mat_inverse_mod_prime",
    "mat_inverse_mod_2e",
    "mat_width_inf",
    "is_short",
    "mat_centered_l2",
    "mat_coeff_std",
]


@dataclass
class MulCounter:
    """Tally of polynomial (ring element) multiplications performed."""

    count: int = 0

    def wrap(self, mul: RingMul) -> RingMul:
        def counted(a, b):
            self.count += 1
            return mul(a, b)

        return counted


def as_matrix(A) -> Matrix:
    arr = np.asarray(A)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"matrix element must have shape (k, k, n), got {arr.shape}")
    return arr.astype(np.int64, copy=True)


def zero_matrix(k: int, n: int) -> Matrix:
    return np.zeros((k, k, n), dtype=np.int64)


def scalar_matrix(k: int, n: int, value: int) -> Matrix:
    out = zero_matrix(k, n)
    for i in range(k):
        out[i, i, 0] = value
    return out


def identity_matrix(k: int, n: int) -> Matrix:
    return scalar_matrix(k, n, 1)


def _check_pair(A: Matrix, B: Matrix) -> None:
    if A.shape != B.shape:
        raise DimensionError(f"matrix shape mismatch: {A.shape} vs {B.shape}")


def mat_add(A, B) -> Matrix:
    A, B = as_matrix(A), as_matrix(B)
    _check_pair(A, B)
    return A + B


def mat_sub(A, B) -> Matrix:
    A, B = as_matrix(A), as_matrix(B)
    _check_pair(A, B)
    return A - B


def _shift_index(n: int) -> np.ndarray:
    # idx[s, t] = (t - s) mod n
    ar = np.arange(n)
    return np.mod(ar[None, :] - ar[:, None], n)


def mat_mul(A, B, *, mul: Optional[RingMul] = None, counter: Optional[MulCounter] = None) -> Matrix:
    """Standard matrix product with cyclic convolution as scalar product.

    With neither ``mul`` nor ``counter`` the product is computed in one
    vectorised contraction. Otherwise an explicit triple loop calls ``mul``
    (default :func:`nnru.ring.ring_mul`) exactly ``k**3`` times and
    ``counter`` records each call.
    """
    A, B = as_matrix(A), as_matrix(B)
    _check_pair(A, B)
    k, _, n = A.shape
    if mul is None and counter is None:
        circ = B[:, :, _shift_index(n)]  # (l, j, s, t)
        return np.tensordot(A, circ, axes=([1, 2], [0, 2]))
    mul = mul or ring.ring_mul
    if counter is not None:
        mul = counter.wrap(mul)
    C = zero_matrix(k, n)
    for i in range(k):
        for j in range(k):
            acc = C[i, j]
            for l in range(k):
                acc += mul(A[i, l], B[l, j])
    return C


def _strassen(A: Matrix, B: Matrix, mul: RingMul) -> Matrix:
    s = A.shape[0]
    if s == 1:
        return mul(A[0, 0], B[0, 0])[None, None, :]
    if s % 2:
        pad = ((0, 1), (0, 1), (0, 0))
        return _strassen(np.pad(A, pad), np.pad(B, pad), mul)[:s, :s]
    h = s // 2
    a11, a12, a21, a22 = A[:h, :h], A[:h, h:], A[h:, :h], A[h:, h:]
    b11, b12, b21, b22 = B[:h, :h], B[:h, h:], B[h:, :h], B[h:, h:]
    m1 = _strassen(a11 + a22, b11 + b22, mul)
    m2 = _strassen(a21 + a22, b11, mul)
    m3 = _strassen(a11, b12 - b22, mul)
    m4 = _strassen(a22, b21 - b11, mul)
    m5 = _strassen(a11 + a12, b22, mul)
    m6 = _strassen(a21 - a11, b11 + b12, mul)
    m7 = _strassen(a12 - a22, b21 + b22, mul)
    C = np.empty_like(A)
    C[:h, :h] = m1 + m4 - m5 + m7
    C[:h, h:] = m3 + m5
    C[h:, :h] = m2 + m4
    C[h:, h:] = m1 - m2 + m3 + m6
    return C


def mat_mul_strassen(A, B, *, mul: Optional[RingMul] = None, counter: Optional[MulCounter] = None) -> Matrix:
    """Strassen block recursion; odd sizes are padded with a zero row and
    column at each level. Bit-for-bit equal to :func:`mat_mul`."""
    A, B = as_matrix(A), as_matrix(B)
    _check_pair(A, B)
    if A.shape[0] < 2:
        raise DimensionError("Strassen multiplication needs k >= 2")
    mul = mul or ring.ring_mul
    if counter is not None:
        mul = counter.wrap(mul)
    return _strassen(A, B, mul)


def mat_reduce(A, m: int, centered: bool = False) -> Matrix:
    m = int(m)
    if m < 2:
        raise ParameterError(f"modulus must be >= 2, got {m}")
    r = np.mod(as_matrix(A), m)
    if centered:
        r[r > m // 2] -= m
    return r


def _is_identity_mod(P: Matrix, m: int) -> bool:
    k, _, n = P.shape
    return bool(np.array_equal(np.mod(P, m), identity_matrix(k, n)))


def mat_inverse_mod_prime(A, prime: int) -> Matrix:
    """Two-sided inverse over F_prime[X]/(X^n - 1) by Gauss-Jordan elimination.

    Each column is pivoted on the first entry (at or below the diagonal) that
    is a unit of the coefficient ring. If no such entry exists the matrix is
    reported as not invertible; callers sampling keys simply resample.
    """
    prime = int(prime)
    work = np.mod(as_matrix(A), prime)
    k, _, n = work.shape
    inv = identity_matrix(k, n)

    def scale_row(M, r, poly):
        for j in range(k):
            M[r, j] = np.mod(ring.ring_mul(M[r, j], poly), prime)

    for col in range(k):
        pivot = None
        for r in range(col, k):
            try:
                pivot = ring.poly_inverse_mod_prime(work[r, col], prime)
            except NotInvertibleError:
                continue
            if r != col:
                work[[col, r]] = work[[r, col]]
                inv[[col, r]] = inv[[r, col]]
            break
        if pivot is None:
            raise NotInvertibleError(f"no unit pivot in column {col} mod {prime}")
        scale_row(work, col, pivot)
        scale_row(inv, col, pivot)
        for r in range(k):
            if r == col or not work[r, col].any():
                continue
            factor = work[r, col].copy()
            for j in range(k):
                work[r, j] = np.mod(work[r, j] - ring.ring_mul(factor, work[col, j]), prime)
                inv[r, j] = np.mod(inv[r, j] - ring.ring_mul(factor, inv[col, j]), prime)

    A = as_matrix(A)
    if not (_is_identity_mod(mat_mul(A, inv), prime) and _is_identity_mod(mat_mul(inv, A), prime)):
        raise NotInvertibleError(f"inverse check failed mod {prime}")
    return inv


def mat_inverse_mod_2e(A, e: int) -> Matrix:
    """Inverse modulo ``2**e``: invert mod 2, then Newton-lift
    ``B <- B (2I - A B)`` until the modulus reaches ``2**e``."""
    e = int(e)
    if e < 1:
        raise ParameterError(f"exponent must be >= 1, got {e}")
    target = 1 << e
    A = np.mod(as_matrix(A), target)
    k, _, n = A.shape
    B = mat_inverse_mod_prime(A, 2)
    two = scalar_matrix(k, n, 2)
    mod = 2
    while mod < target:
        mod = min(mod * mod, target)
        B = np.mod(mat_mul(B, np.mod(two - mat_mul(A, B), mod)), mod)
    if not (_is_identity_mod(mat_mul(A, B), target) and _is_identity_mod(mat_mul(B, A), target)):
        raise NotInvertibleError(f"inverse check failed mod 2**{e}")
    return B


def mat_width_inf(A) -> int:
    """Global max coefficient minus global min coefficient."""
    A = as_matrix(A)
    if A.size == 0:
        return 0
    return int(A.max() - A.min())


def is_short(A, p: int) -> bool:
    return mat_width_inf(A) <= p


def mat_centered_l2(A) -> float:
    """sqrt of the sum of squared deviations from the mean coefficient."""
    flat = as_matrix(A).ravel()
    if flat.size == 0:
        return 0.0
    total = int(flat.sum())
    sq = int(np.dot(flat, flat))
    # exact integer form of sum((c - mu)^2) * N
    num = sq * flat.size - total * total
    return math.sqrt(num / flat.size)


def mat_coeff_std(A) -> float:
    """Standard deviation of all n*k^2 coefficients (centered norm / sqrt(nk^2))."""
    A = as_matrix(A)
    return mat_centered_l2(A) / math.sqrt(A.size) if A.size else 0.0
