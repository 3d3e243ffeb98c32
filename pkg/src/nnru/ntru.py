"""Classic NTRU over Z[X]/(X^N - 1), the speed baseline.

Same shape as NNRU with k = 1: h = F_q g, e = p phi h + m (mod q),
a = f e centered mod q, m = F_p a centered mod p. Convolution comes from
:mod:`nnru.ring`, so both schemes share one multiplication routine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ring
from .errors import EncodingError, KeygenError, NotInvertibleError, ParameterError
from .params import Params
from .scheme import DEFAULT_RETRIES, sample_ternary

RingMul = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class NtruParams:
    N: int
    p: int
    q: int
    d: int

    def validate(self) -> None:
        if math.gcd(self.p, self.q) != 1:
            raise ParameterError(f"gcd(p, q) = {math.gcd(self.p, self.q)} != 1")
        if self.q < 2 or self.q & (self.q - 1):
            raise ParameterError(f"q must be a power of two, got {self.q}")
        if self.d < 0 or 2 * self.d > self.N:
            raise ParameterError(f"d={self.d} violates 0 <= 2d <= N={self.N}")

    @classmethod
    def matching(cls, params: Params) -> "NtruParams":
        """NTRU with the same plaintext block size: N = n k^2, same p and q.

        The weight is scaled by k^2 so the density of nonzero coefficients
        matches the NNRU key entries.
        """
        N = params.coeff_count
        return cls(N=N, p=params.p, q=params.q, d=min(params.d_f * params.k**2, N // 2))


@dataclass
class NtruKeyPair:
    h: np.ndarray
    f: np.ndarray
    F_p: np.ndarray
    g: np.ndarray
    params: NtruParams


def ntru_keygen(
    params: NtruParams,
    rng: np.random.Generator,
    retries: int = DEFAULT_RETRIES,
) -> NtruKeyPair:
    params.validate()
    N, p, q, d = params.N, params.p, params.q, params.d
    e = q.bit_length() - 1
    for _ in range(retries):
        f = sample_ternary(N, d, d - 1, rng) if d > 0 else ring.zero(N)
        try:
            F_q = ring.poly_inverse_mod_2e(f, e)
            F_p = ring.poly_inverse_mod_prime(f, p)
        except NotInvertibleError:
            continue
        g = sample_ternary(N, d, d, rng)
        h = ring.reduce_mod(ring.ring_mul(F_q, g), q)
        return NtruKeyPair(h, f, F_p, g, params)
    raise KeygenError(f"no invertible f after {retries} draws (N={N}, d={d})")


def ntru_encrypt(
    kp: NtruKeyPair,
    m,
    rng: Optional[np.random.Generator] = None,
    *,
    phi: Optional[np.ndarray] = None,
    mul: RingMul = ring.ring_mul,
) -> np.ndarray:
    params = kp.params
    m = ring.as_poly(m)
    half = (params.p - 1) // 2
    if m.size != params.N or (m.size and (m.min() < -half or m.max() > half)):
        raise EncodingError("message must be N centered residues mod p")
    if phi is None:
        if rng is None:
            raise ParameterError("ntru_encrypt needs an rng unless phi is given")
        phi = sample_ternary(params.N, params.d, params.d, rng)
    return ring.reduce_mod(params.p * mul(phi, kp.h) + m, params.q)


def ntru_decrypt(kp: NtruKeyPair, e, *, mul: RingMul = ring.ring_mul) -> np.ndarray:
    params = kp.params
    a = ring.reduce_centered(mul(kp.f, e), params.q)
    return ring.reduce_centered(mul(kp.F_p, ring.reduce_mod(a, params.p)), params.p)


def ntru_exact_b(kp: NtruKeyPair, phi, m) -> np.ndarray:
    """p phi g + f m over the integers; decryption works iff it sits in the
    centered window mod q."""
    return kp.params.p * ring.ring_mul(phi, kp.g) + ring.ring_mul(kp.f, m)
