"""Brute-force search-space counts and an exhaustive key search for toy sizes."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..errors import ParameterError, SearchSpaceError
from ..matrix import is_short, mat_mul, mat_reduce
from ..params import Params
from ..scheme import PublicKey


def ternary_count(n: int, d: int) -> int:
    """|L(d, d)| = n! / ((n - 2d)! d!^2)."""
    if d < 0 or 2 * d > n:
        raise ParameterError(f"L({d}, {d}) is empty for n={n}")
    return math.factorial(n) // (math.factorial(n - 2 * d) * math.factorial(d) ** 2)


def key_security(params: Params) -> int:
    """Number of (f, g) pairs: |L(d_f, d_f)|^(2 k^2)."""
    return ternary_count(params.n, params.d_f) ** (2 * params.k**2)


def message_security(params: Params) -> int:
    return ternary_count(params.n, params.d_phi) ** (2 * params.k**2)


@dataclass(frozen=True)
class SecurityReport:
    params: Params
    key_count: int
    message_count: int

    @property
    def key_mitm(self) -> int:
        """Meet-in-the-middle cost estimate: square root of the key count."""
        return math.isqrt(self.key_count)

    @property
    def message_mitm(self) -> int:
        return math.isqrt(self.message_count)

    def lines(self) -> list[str]:
        p = self.params
        return [
            f"security: n={p.n} k={p.k} d_f={p.d_f} d_phi={p.d_phi}",
            f"key_security={self.key_count} (~2^{math.log2(self.key_count):.1f})",
            f"key_mitm={self.key_mitm}",
            f"message_security={self.message_count} (~2^{math.log2(self.message_count):.1f})",
            f"message_mitm={self.message_mitm}",
        ]


def security_report(params: Params) -> SecurityReport:
    return SecurityReport(params, key_security(params), message_security(params))


def ternary_polys(n: int, d1: int, d2: int) -> Iterator[np.ndarray]:
    """Every element of L(d1, d2)."""
    for ones in itertools.combinations(range(n), d1):
        rest = [i for i in range(n) if i not in ones]
        for minus in itertools.combinations(rest, d2):
            poly = np.zeros(n, dtype=np.int64)
            poly[list(ones)] = 1
            poly[list(minus)] = -1
            yield poly


def key_matrices(k: int, n: int, d: int) -> Iterator[np.ndarray]:
    """Every matrix in the key sample space (see ``sample_key_matrix``)."""
    diag = list(ternary_polys(n, d, d - 1)) if d > 0 else [np.zeros(n, dtype=np.int64)]
    off = list(ternary_polys(n, d, d))
    pools = [diag if i == j else off for i in range(k) for j in range(k)]
    for combo in itertools.product(*pools):
        yield np.array(combo, dtype=np.int64).reshape(k, k, n)


@dataclass
class BruteForceResult:
    g_candidates: list[np.ndarray]
    f_candidates: list[np.ndarray]
    searched: int

    @property
    def pairs(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        return itertools.product(self.f_candidates, self.g_candidates)

    def contains(self, f: np.ndarray, g: np.ndarray) -> bool:
        has_g = any(np.array_equal(g, c) for c in self.g_candidates)
        has_f = any(np.array_equal(f, c) for c in self.f_candidates)
        return has_g and has_f


def brute_force_attack(pub: PublicKey, params: Params, budget: int) -> BruteForceResult:
    """Try every g with h g short and every f with f H short (mod q, centered).

    The true g gives h g = w and the true f gives f H = c, both ternary, so
    the real key is always among the flagged candidates.

    Raises:
        SearchSpaceError: when ``key_security(params)`` exceeds ``budget``.
    """
    size = key_security(params)
    if budget <= 0 or size > budget:
        raise SearchSpaceError(f"search space {size} exceeds budget {budget}")
    q, p = params.q, params.p
    g_hits, f_hits, searched = [], [], 0
    for cand in key_matrices(params.k, params.n, params.d_f):
        searched += 1
        if is_short(mat_reduce(mat_mul(pub.h, cand), q, centered=True), p):
            g_hits.append(cand)
        if is_short(mat_reduce(mat_mul(cand, pub.H), q, centered=True), p):
            f_hits.append(cand)
    return BruteForceResult(g_hits, f_hits, searched)
