"""Monte-Carlo decryption failure rate and the width of B."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..matrix import mat_coeff_std, mat_width_inf
from ..params import BNormPrediction, Params, predict_b_norm
from ..scheme import decrypt, encrypt, exact_b, keygen, sample_matrix, sample_message
from ..streams import derive_rng
from ._trials import run_trials


@dataclass(frozen=True)
class FailureTrial:
    index: int
    success: bool
    width: int
    max_coeff: int
    min_coeff: int
    b_std: float
    in_window: bool
    width_exceeds_q: bool


@dataclass
class FailureReport:
    params: Params
    predicted: BNormPrediction
    records: list[FailureTrial]

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def failures(self) -> int:
        return sum(not r.success for r in self.records)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.records else 0.0

    @property
    def out_of_window(self) -> int:
        return sum(not r.in_window for r in self.records)

    @property
    def wide(self) -> int:
        """Trials whose exact B has width above q."""
        return sum(r.width_exceeds_q for r in self.records)

    @property
    def criterion_mismatches(self) -> list[int]:
        """Trials where decryption success disagrees with B fitting the window."""
        return [r.index for r in self.records if r.success != r.in_window]

    @property
    def measured_sigma(self) -> float:
        """Pooled standard deviation of B's coefficients over all trials."""
        if not self.records:
            return 0.0
        return math.sqrt(sum(r.b_std**2 for r in self.records) / len(self.records))

    def lines(self) -> list[str]:
        p = self.params
        return [
            f"failure: n={p.n} k={p.k} p={p.p} q={p.q} trials={self.trials}",
            f"failures={self.failures} rate={self.failure_rate:.4%} "
            f"out_of_window={self.out_of_window} width>q={self.wide}",
            f"sigma: measured={self.measured_sigma:.2f} predicted={self.predicted.sigma:.2f} "
            f"product-adjusted={self.predicted.sigma_product_adjusted:.2f}",
            f"success<=>window mismatches: {len(self.criterion_mismatches)}",
        ]


def _failure_trial(params: Params, seed: int, index: int) -> FailureTrial:
    rng = derive_rng(seed, "failure", index)
    pub, priv = keygen(params, rng)
    m = sample_message(params, rng)
    phi = sample_matrix(params.k, params.n, params.d_phi, rng)
    recovered = decrypt(priv, encrypt(pub, m, phi=phi))
    B = exact_b(pub, priv, phi, m)
    half = params.q // 2
    lo, hi = int(B.min()), int(B.max())
    return FailureTrial(
        index=index,
        success=bool(np.array_equal(recovered, m)),
        width=mat_width_inf(B),
        max_coeff=hi,
        min_coeff=lo,
        b_std=mat_coeff_std(B),
        in_window=(lo > -half and hi <= half),
        width_exceeds_q=mat_width_inf(B) > params.q,
    )


def _trial_entry(ctx, index):
    params, seed = ctx
    return _failure_trial(params, seed, index)


def measure_failure_rate(params: Params, trials: int, seed: int, jobs: int = 1) -> FailureReport:
    """Run ``trials`` independent keygen / encrypt / decrypt rounds.

    Each trial also computes the exact integer matrix B = p f phi w + c m g
    from the private values, so success can be compared against B lying in
    the centered window (-q/2, q/2].
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    records = run_trials(_trial_entry, (params, seed), trials, jobs)
    return FailureReport(params, predict_b_norm(params), records)
