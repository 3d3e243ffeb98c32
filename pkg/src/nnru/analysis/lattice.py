"""Does a short S with S h = f h g exist?

For k = 1 the ring is commutative and S = f g is a short solution, which is
exactly what a lattice attack on NTRU exploits. For k >= 2 the map
h -> f h g is not a right multiple of h by anything short, and solving the
linear system S h = f h g over a prime field returns an S whose
coefficients look uniform. This module builds that system explicitly
(rows indexed by the cyclic-shift basis of h) and measures the solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import KeygenError, NotInvertibleError, ParameterError
from ..matrix import (
    Matrix,
    as_matrix,
    mat_centered_l2,
    mat_coeff_std,
    mat_inverse_mod_prime,
    mat_mul,
    mat_reduce,
)
from ..ring import is_prime
from ..scheme import DEFAULT_RETRIES, sample_key_matrix
from ..streams import derive_rng
from ._trials import run_trials

DEFAULT_PRIME = 257
SHORT_FRACTION = 0.30
UNIFORM_TOLERANCE = 0.20


def shift_matrix(h: Matrix, prime: int) -> np.ndarray:
    """The nk^2 x nk^2 matrix L of S -> S h over F_prime.

    Row (i, l, s) is the flattened product of X^s placed at entry (i, l)
    with h, i.e. the s-th cyclic shift of row l of h written into row i.
    """
    h = np.mod(as_matrix(h), prime)
    k, _, n = h.shape
    ar = np.arange(n)
    circ = h[:, :, np.mod(ar[None, :] - ar[:, None], n)]  # (l, j, s, t)
    circ = circ.transpose(0, 2, 1, 3)  # (l, s, j, t)
    L = np.zeros((k, k, n, k, k, n), dtype=np.int64)
    for i in range(k):
        L[i, :, :, i, :, :] = circ
    size = k * k * n
    return L.reshape(size, size)


def solve_mod_prime(A: np.ndarray, b: np.ndarray, prime: int) -> Optional[np.ndarray]:
    """One solution x of A x = b over F_prime (free variables set to 0),
    or None when the system is inconsistent."""
    A = np.mod(np.asarray(A, dtype=np.int64), prime)
    b = np.mod(np.asarray(b, dtype=np.int64), prime)
    rows, cols = A.shape
    aug = np.concatenate([A, b[:, None]], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        nz = np.flatnonzero(aug[r:, c])
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            aug[[r, pr]] = aug[[pr, r]]
        aug[r] = np.mod(aug[r] * pow(int(aug[r, c]), -1, prime), prime)
        others = np.flatnonzero(aug[:, c])
        others = others[others != r]
        if others.size:
            aug[others] = np.mod(aug[others] - np.outer(aug[others, c], aug[r]), prime)
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if np.any(aug[r:, -1]):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = aug[row, -1]
    return x


def shift_module_solution(h: Matrix, target: Matrix, prime: int = DEFAULT_PRIME):
    """Solve S h = target over F_prime[X]/(X^n - 1).

    Returns:
        ``(S, norm)`` with S centered mod ``prime`` and ``norm`` its centered
        L2 norm, or ``(None, None)`` when no solution exists.
    """
    if not is_prime(prime):
        raise ParameterError(f"{prime} is not prime")
    h, target = as_matrix(h), as_matrix(target)
    if h.shape != target.shape:
        raise ParameterError(f"shape mismatch {h.shape} vs {target.shape}")
    L = shift_matrix(h, prime)
    x = solve_mod_prime(L.T, target.ravel(), prime)
    if x is None:
        return None, None
    S = mat_reduce(x.reshape(h.shape), prime, centered=True)
    return S, mat_centered_l2(S)


def uniform_baseline(prime: int) -> float:
    """Standard deviation of a uniform residue mod ``prime``, ~ prime/sqrt(12)."""
    return math.sqrt((prime * prime - 1) / 12.0)


@dataclass(frozen=True)
class MembershipTrial:
    index: int
    solved: bool
    std: float
    baseline: float
    matches_fg: Optional[bool]

    @property
    def short(self) -> bool:
        return self.solved and self.std <= SHORT_FRACTION * self.baseline

    @property
    def uniform_like(self) -> bool:
        return self.solved and abs(self.std - self.baseline) <= UNIFORM_TOLERANCE * self.baseline


@dataclass
class MembershipReport:
    n: int
    k: int
    d: int
    prime: int
    records: list[MembershipTrial]

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def short_fraction(self) -> float:
        return sum(r.short for r in self.records) / self.trials

    @property
    def uniform_fraction(self) -> float:
        return sum(r.uniform_like for r in self.records) / self.trials

    @property
    def verdict(self) -> str:
        return "short" if self.short_fraction >= 0.5 else "non-short"

    def lines(self) -> list[str]:
        base = uniform_baseline(self.prime)
        stds = [r.std for r in self.records if r.solved]
        med = float(np.median(stds)) if stds else float("nan")
        return [
            f"membership: n={self.n} k={self.k} d={self.d} prime={self.prime} trials={self.trials}",
            f"uniform baseline std={base:.2f}; median solution std={med:.2f}",
            f"short (<= {SHORT_FRACTION:.0%} of baseline): {self.short_fraction:.1%}; "
            f"uniform-like (within {UNIFORM_TOLERANCE:.0%}): {self.uniform_fraction:.1%}",
            f"verdict: {self.verdict} solution to S h = f h g",
        ]


def _sample_invertible(k, n, d, prime, rng):
    for _ in range(DEFAULT_RETRIES):
        M = sample_key_matrix(k, n, d, rng)
        try:
            return M, mat_inverse_mod_prime(M, prime)
        except NotInvertibleError:
            continue
    raise KeygenError(f"no matrix invertible mod {prime} after {DEFAULT_RETRIES} draws")


def _membership_trial(ctx, index) -> MembershipTrial:
    n, k, d, prime, seed = ctx
    rng = derive_rng(seed, "membership", index)
    f = sample_key_matrix(k, n, d, rng)
    g, G = _sample_invertible(k, n, d, prime, rng)
    w, _ = _sample_invertible(k, n, d, prime, rng)
    h = mat_reduce(mat_mul(w, G), prime)
    target = mat_reduce(mat_mul(mat_mul(f, h), g), prime)
    S, _ = shift_module_solution(h, target, prime)
    if S is None:
        return MembershipTrial(index, False, float("nan"), uniform_baseline(prime), None)
    matches = None
    if k == 1:
        matches = bool(np.array_equal(S, mat_reduce(mat_mul(f, g), prime, centered=True)))
    return MembershipTrial(index, True, mat_coeff_std(S), uniform_baseline(prime), matches)


def membership_experiment(
    n: int, k: int, d: int, trials: int, seed: int, prime: int = DEFAULT_PRIME, jobs: int = 1
) -> MembershipReport:
    """Per trial: fresh keys over F_prime with g and w invertible (so h is and
    the solution is unique), target f h g, solve S h = target, measure S."""
    if not is_prime(prime):
        raise ParameterError(f"{prime} is not prime")
    records = run_trials(_membership_trial, (n, k, d, prime, seed), trials, jobs)
    return MembershipReport(n, k, d, prime, records)
