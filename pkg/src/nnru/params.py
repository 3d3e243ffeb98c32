"""Parameter sets, presets, validation and the decryption-width estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import ParameterError

__all__ = [
    "Params",
    "PRESETS",
    "get_preset",
    "find_preset",
    "BNormPrediction",
    "predict_b_norm",
    "ParamReport",
    "validate_params",
    "MARGIN_THRESHOLD",
]

MARGIN_THRESHOLD = 5.0


@dataclass(frozen=True)
class Params:
    """NNRU parameters.

    ``n`` ring degree, ``k`` matrix dimension, ``p`` small modulus, ``q``
    large modulus (a power of two); ``d_f, d_w, d_c, d_phi`` are the ternary
    weights of the sample spaces for f and g, w, c and the blinding value.
    """

    n: int
    k: int
    p: int
    q: int
    d_f: int
    d_w: int
    d_c: int
    d_phi: int
    name: Optional[str] = field(default=None, compare=False)

    @property
    def q_exponent(self) -> int:
        return self.q.bit_length() - 1

    @property
    def coeff_count(self) -> int:
        """Number of coefficients in one matrix element, n*k^2."""
        return self.n * self.k * self.k

    @property
    def shape_key(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.p, self.q)

    def with_(self, **changes) -> "Params":
        changes.setdefault("name", None)
        return replace(self, **changes)


def _uniform(name, n, k, p, q, d) -> Params:
    return Params(n=n, k=k, p=p, q=q, d_f=d, d_w=d, d_c=d, d_phi=d, name=name)


PRESETS: dict[str, Params] = {
    "toy-micro": _uniform("toy-micro", 3, 1, 3, 64, 1),
    "toy": _uniform("toy", 7, 2, 3, 512, 2),
    "small": _uniform("small", 29, 3, 3, 1024, 4),
    "reference": _uniform("reference", 59, 3, 3, 2048, 6),
}


def get_preset(name: str) -> Params:
    try:
        return PRESETS[name]
    except KeyError:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def find_preset(n: int, k: int, p: int, q: int) -> Optional[Params]:
    for preset in PRESETS.values():
        if preset.shape_key == (n, k, p, q):
            return preset
    return None


@dataclass(frozen=True)
class BNormPrediction:
    """Expected size of B = p*f*phi*w + c*m*g.

    ``b_norm`` and ``sigma`` follow the two-term norm-product estimate
    directly. ``sigma_product_adjusted`` divides by ``k`` to account for a
    k x k matrix product shrinking the squared norm by a factor ``k``
    relative to the product of norms; it coincides with ``sigma`` at k = 1.
    """

    blinding_term: float
    message_term: float
    b_norm: float
    sigma: float
    sigma_product_adjusted: float


def _ternary_norm_sq(d: int, k: int) -> float:
    return 2.0 * d * k * k


def predict_b_norm(params: Params, message_norm_sq: Optional[float] = None) -> BNormPrediction:
    """Evaluate ||B||^2 ~ p^2 |f|^2 |phi|^2 |w|^2 + |c|^2 |m|^2 |g|^2.

    Ternary matrices with weight d in every entry have |X|^2 = 2 d k^2. The
    message is modelled as uniform over the centered residues mod p, giving
    |m|^2 = n k^2 (p^2 - 1) / 12 unless ``message_norm_sq`` is supplied.
    """
    k, p = params.k, params.p
    f2 = g2 = _ternary_norm_sq(params.d_f, k)
    phi2 = _ternary_norm_sq(params.d_phi, k)
    w2 = _ternary_norm_sq(params.d_w, k)
    c2 = _ternary_norm_sq(params.d_c, k)
    if message_norm_sq is None:
        message_norm_sq = params.coeff_count * (p * p - 1) / 12.0
    blinding = float(p * p) * f2 * phi2 * w2
    message = c2 * message_norm_sq * g2
    b_norm = math.sqrt(blinding + message)
    sigma = b_norm / math.sqrt(params.coeff_count)
    return BNormPrediction(blinding, message, b_norm, sigma, sigma / k)


@dataclass
class ParamReport:
    params: Params
    prediction: BNormPrediction
    margin: float
    failure_prone: bool
    warnings: list[str]

    @property
    def sigma(self) -> float:
        return self.prediction.sigma

    def lines(self) -> list[str]:
        pr = self.prediction
        out = [
            f"params: n={self.params.n} k={self.params.k} p={self.params.p} q={self.params.q} "
            f"d_f={self.params.d_f} d_w={self.params.d_w} d_c={self.params.d_c} d_phi={self.params.d_phi}",
            f"predicted ||B|| = {pr.b_norm:.1f}, sigma = {pr.sigma:.2f} "
            f"(product-adjusted {pr.sigma_product_adjusted:.2f})",
            f"margin q/(2 sigma) = {self.margin:.2f}"
            + ("  [FAILURE-PRONE]" if self.failure_prone else ""),
        ]
        out.extend(f"warning: {w}" for w in self.warnings)
        return out


def validate_params(params: Params) -> ParamReport:
    """Check hard constraints and report the decryption margin q/(2 sigma).

    Raises:
        ParameterError: on coprimality, modulus or weight violations.
    """
    n, k, p, q = params.n, params.k, params.p, params.q
    if n < 2 or k < 1:
        raise ParameterError(f"need n >= 2 and k >= 1, got n={n} k={k}")
    if p not in (2, 3):
        raise ParameterError(f"p must be 2 or 3, got {p}")
    if q < 2 or q & (q - 1):
        raise ParameterError(f"q must be a power of two, got {q}")
    if math.gcd(p, q) != 1:
        raise ParameterError(f"p and q must be coprime, gcd({p}, {q}) = {math.gcd(p, q)}")
    if q > 1 << 16:
        raise ParameterError("q above 2**16 does not fit the 16-bit key format")
    for label in ("d_f", "d_w", "d_c", "d_phi"):
        d = getattr(params, label)
        if d < 0 or 2 * d > n:
            raise ParameterError(f"{label}={d} violates 0 <= 2*{label} <= n={n}")

    warnings = []
    if not 8 <= params.q_exponent <= 11:
        warnings.append(f"q = 2^{params.q_exponent} is outside the usual 2^8..2^11 range")
    prediction = predict_b_norm(params)
    margin = q / (2 * prediction.sigma) if prediction.sigma > 0 else math.inf
    failure_prone = margin < MARGIN_THRESHOLD
    if failure_prone:
        warnings.append(f"margin {margin:.2f} < {MARGIN_THRESHOLD}: decryption failures likely")
    return ParamReport(params, prediction, margin, failure_prone, warnings)
