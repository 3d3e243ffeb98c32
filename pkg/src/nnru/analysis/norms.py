"""Empirical check of the width-versus-L2 product law."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from ..matrix import mat_centered_l2, mat_mul, mat_width_inf
from ..ring import poly_l2_norm, poly_width_inf, ring_mul
from ..scheme import sample_matrix, sample_ternary
from ..streams import derive_rng
from ._trials import run_trials

MIN_TRIALS = 100


@dataclass
class GammaReport:
    n: int
    k: int
    d: int
    trials: int
    samples: np.ndarray = field(repr=False)
    widths: np.ndarray = field(repr=False)

    @property
    def min(self) -> float:
        return float(self.samples.min())

    @property
    def median(self) -> float:
        return float(np.median(self.samples))

    @property
    def max(self) -> float:
        return float(self.samples.max())

    @property
    def gamma1(self) -> float:
        return float(np.percentile(self.samples, 1))

    @property
    def gamma2(self) -> float:
        return float(np.percentile(self.samples, 99))

    def lines(self) -> list[str]:
        return [
            f"gamma: n={self.n} k={self.k} d={self.d} trials={self.trials}",
            f"ratio width(M1*M2) / (|M1| |M2|): min={self.min:.4f} median={self.median:.4f} max={self.max:.4f}",
            f"[gamma1, gamma2] (1st/99th percentile) = [{self.gamma1:.4f}, {self.gamma2:.4f}]",
        ]


def _gamma_trial(ctx, index):
    n, k, d, seed = ctx
    rng = derive_rng(seed, "gamma", index)
    if k == 1:
        a = sample_ternary(n, d, d, rng)
        b = sample_ternary(n, d, d, rng)
        width = poly_width_inf(ring_mul(a, b))
        return width, width / (poly_l2_norm(a) * poly_l2_norm(b))
    A = sample_matrix(k, n, d, rng)
    B = sample_matrix(k, n, d, rng)
    width = mat_width_inf(mat_mul(A, B))
    return width, width / (mat_centered_l2(A) * mat_centered_l2(B))


def estimate_gamma(n: int, k: int, d: int, trials: int, seed: int, jobs: int = 1) -> GammaReport:
    """Sample pairs from L(d, d) and record width(M1 M2) / (|M1| |M2|).

    For k = 1 the norms are plain L2 norms of the polynomials; otherwise the
    centered L2 norm of the matrices. The two agree on L(d, d) samples, whose
    coefficients sum to zero.
    """
    if trials < MIN_TRIALS:
        raise ParameterError(f"need at least {MIN_TRIALS} trials, got {trials}")
    if d < 1 or 2 * d > n or k < 1:
        raise ParameterError(f"invalid (n, k, d) = ({n}, {k}, {d})")
    rows = run_trials(_gamma_trial, (n, k, d, seed), trials, jobs)
    widths = np.array([r[0] for r in rows], dtype=np.int64)
    samples = np.array([r[1] for r in rows], dtype=float)
    return GammaReport(n, k, d, trials, samples, widths)
