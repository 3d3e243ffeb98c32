"""Multiple-transmission attack: the same plaintext sent under fresh blinding.

e_i - e_1 = p (phi_i - phi_1) h (mod q), so right-multiplying by h^-1 and
the scalar p^-1 mod q exposes phi_i - phi_1. Its entries lie in [-2, 2], well
inside the centered window, so the recovery is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import AttackInapplicableError, NotInvertibleError, ParameterError
from ..matrix import Matrix, mat_inverse_mod_2e, mat_mul, mat_reduce
from ..params import Params
from ..scheme import Ciphertext

# phi_i - phi_1 of two ternary matrices
CLEAN_BOUND = 2


@dataclass
class MTAResult:
    differences: list[Matrix]
    clean: list[bool]

    @property
    def all_clean(self) -> bool:
        return all(self.clean)

    def lines(self) -> list[str]:
        out = [f"mta: {len(self.differences)} differences recovered"]
        for i, (delta, ok) in enumerate(zip(self.differences, self.clean), start=2):
            status = "clean difference" if ok else "not a clean difference"
            out.append(f"phi_{i} - phi_1: {status} (max |coeff| = {int(np.abs(delta).max())})")
        return out


def _as_matrix(e) -> np.ndarray:
    return e.e if isinstance(e, Ciphertext) else np.asarray(e, dtype=np.int64)


def multiple_transmission_attack(
    ciphertexts: Sequence[Ciphertext | Matrix], h: Matrix, params: Params
) -> MTAResult:
    """Recover phi_i - phi_1 for i = 2..r.

    Raises:
        AttackInapplicableError: if h has no inverse mod q.
    """
    if len(ciphertexts) < 2:
        raise ParameterError("need at least two ciphertexts")
    q = params.q
    try:
        h_inv = mat_inverse_mod_2e(h, params.q_exponent)
    except NotInvertibleError as exc:
        raise AttackInapplicableError("public key h is not invertible mod q") from exc
    p_inv = pow(params.p, -1, q)
    first = _as_matrix(ciphertexts[0])
    diffs, clean = [], []
    for ct in ciphertexts[1:]:
        delta = mat_mul(mat_reduce(_as_matrix(ct) - first, q), h_inv)
        delta = mat_reduce(delta * p_inv, q, centered=True)
        diffs.append(delta)
        clean.append(bool(np.abs(delta).max(initial=0) <= CLEAN_BOUND))
    return MTAResult(diffs, clean)
