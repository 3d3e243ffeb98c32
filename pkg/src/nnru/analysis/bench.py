"""NNRU versus NTRU at equal plaintext block size N = n k^2."""
from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ..errors import ParameterError
from ..matrix import MulCounter, mat_mul, mat_mul_strassen
from ..ntru import NtruParams, ntru_decrypt, ntru_encrypt, ntru_keygen
from ..params import Params
from ..ring import ring_mul, ring_mul_schoolbook
from ..scheme import decrypt, encrypt, keygen, sample_matrix, sample_message, sample_ternary
from ..streams import derive_rng

BACKENDS = ("schoolbook", "numpy", "strassen")
MIN_TRIALS = 10


def strassen_mul_count(k: int) -> int:
    """Leaf multiplications of the padded Strassen recursion on k x k blocks."""
    if k == 1:
        return 1
    return 7 * strassen_mul_count((k + (k % 2)) // 2)


@dataclass(frozen=True)
class SizeTable:
    """Closed-form sizes in bits for one scheme."""

    plaintext_bits: float
    ciphertext_bits: float
    message_expansion: float
    private_key_bits: float
    public_key_bits: float


def nnru_sizes(params: Params) -> SizeTable:
    nk2 = params.coeff_count
    lp, lq = math.log2(params.p), math.log2(params.q)
    return SizeTable(nk2 * lp, nk2 * lq, math.log(params.q, params.p), 2 * nk2 * lp, 2 * nk2 * lq)


def ntru_sizes(params: NtruParams) -> SizeTable:
    N = params.N
    lp, lq = math.log2(params.p), math.log2(params.q)
    return SizeTable(N * lp, N * lq, math.log(params.q, params.p), 2 * N * lp, N * lq)


@dataclass
class Timing:
    keygen: float
    encrypt: float
    decrypt: float


@dataclass
class BenchReport:
    params: Params
    ntru_params: NtruParams
    backend: str
    trials: int
    nnru: Timing
    ntru: Timing
    nnru_sizes: SizeTable
    ntru_sizes: SizeTable
    nnru_poly_muls_per_product: int
    nnru_strassen_muls_per_product: int
    nnru_poly_muls_per_encrypt: int
    ntru_poly_muls_per_encrypt: int
    round_trips_ok: bool
    notes: list[str] = field(default_factory=list)

    @property
    def nnru_encrypt_ops(self) -> int:
        """Coefficient multiply-adds per NNRU encryption (schoolbook)."""
        return self.nnru_poly_muls_per_encrypt * self.params.n**2

    @property
    def ntru_encrypt_ops(self) -> int:
        return self.ntru_poly_muls_per_encrypt * self.ntru_params.N**2

    @property
    def encrypt_speedup(self) -> float:
        return self.ntru.encrypt / self.nnru.encrypt

    @property
    def decrypt_speedup(self) -> float:
        return self.ntru.decrypt / self.nnru.decrypt

    def rows(self) -> list[tuple[str, str, str]]:
        a, b = self.ntru_sizes, self.nnru_sizes
        ms = lambda s: f"{s * 1e3:.3f} ms"  # noqa: E731
        return [
            ("Plain text block (bits)", f"{a.plaintext_bits:.1f}", f"{b.plaintext_bits:.1f}"),
            ("Encrypted text block (bits)", f"{a.ciphertext_bits:.1f}", f"{b.ciphertext_bits:.1f}"),
            ("Encryption multiply-adds", str(self.ntru_encrypt_ops), str(self.nnru_encrypt_ops)),
            ("Polynomial products per encryption",
             f"{self.ntru_poly_muls_per_encrypt} (degree {self.ntru_params.N})",
             f"{self.nnru_poly_muls_per_encrypt} (degree {self.params.n})"),
            ("Message expansion", f"{a.message_expansion:.3f} to 1", f"{b.message_expansion:.3f} to 1"),
            ("Private key (bits)", f"{a.private_key_bits:.1f}", f"{b.private_key_bits:.1f}"),
            ("Public key (bits)", f"{a.public_key_bits:.1f}", f"{b.public_key_bits:.1f}"),
            ("Keygen (median)", ms(self.ntru.keygen), ms(self.nnru.keygen)),
            ("Encrypt (median)", ms(self.ntru.encrypt), ms(self.nnru.encrypt)),
            ("Decrypt (median)", ms(self.ntru.decrypt), ms(self.nnru.decrypt)),
        ]

    def lines(self) -> list[str]:
        p = self.params
        out = [
            f"bench: NNRU n={p.n} k={p.k} vs NTRU N={self.ntru_params.N} "
            f"(p={p.p} q={p.q}) backend={self.backend} trials={self.trials}",
        ]
        rows = [("Characteristic", "NTRU", "NNRU")] + self.rows()
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        for r in rows:
            out.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        out.append(
            f"matrix product: {self.nnru_poly_muls_per_product} polynomial products schoolbook, "
            f"{self.nnru_strassen_muls_per_product} with Strassen"
        )
        out.append(f"speedup NTRU/NNRU: encrypt {self.encrypt_speedup:.2f}x, decrypt {self.decrypt_speedup:.2f}x")
        out.extend(self.notes)
        return out


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return time.perf_counter() - t0, out


def benchmark_compare(
    params: Params,
    trials: int,
    seed: int,
    backend: str = "schoolbook",
    keygen_trials: int = 5,
) -> BenchReport:
    """Time NNRU(n, k) against NTRU(N = n k^2) on identical plaintext loads.

    Encryption and decryption run with the selected convolution backend:
    ``schoolbook`` (pure-Python n^2 convolution, the operation-count model),
    ``numpy`` or ``strassen`` (Strassen block products over schoolbook
    leaves). Blinding values are drawn before timing starts. Key generation
    always uses the fast arithmetic and is timed ``keygen_trials`` times.
    """
    if trials < MIN_TRIALS:
        raise ParameterError(f"need at least {MIN_TRIALS} trials, got {trials}")
    if backend not in BACKENDS:
        raise ParameterError(f"backend must be one of {BACKENDS}")
    ntru_params = NtruParams.matching(params)
    leaf = ring_mul if backend == "numpy" else ring_mul_schoolbook
    counter = MulCounter()
    if backend == "strassen" and params.k >= 2:
        product = partial(mat_mul_strassen, mul=leaf, counter=counter)
    else:
        product = partial(mat_mul, mul=leaf, counter=counter)

    kg_nnru, kg_ntru = [], []
    for i in range(max(1, keygen_trials)):
        t, keys = _timed(keygen, params, derive_rng(seed, "bench-nnru-keygen", i))
        kg_nnru.append(t)
        t, ntru_keys = _timed(ntru_keygen, ntru_params, derive_rng(seed, "bench-ntru-keygen", i))
        kg_ntru.append(t)
    pub, priv = keys

    enc_nnru, dec_nnru, enc_ntru, dec_ntru = [], [], [], []
    ok = True
    muls_per_encrypt = None
    for i in range(trials):
        rng = derive_rng(seed, "bench-trial", i)
        m = sample_message(params, rng)
        phi = sample_matrix(params.k, params.n, params.d_phi, rng)
        before = counter.count
        t, ct = _timed(encrypt, pub, m, phi=phi, product=product)
        if muls_per_encrypt is None:
            muls_per_encrypt = counter.count - before
        enc_nnru.append(t)
        t, out = _timed(decrypt, priv, ct, product=product)
        dec_nnru.append(t)
        ok &= bool(np.array_equal(out, m))

        m_flat = m.reshape(-1)
        phi_n = sample_ternary(ntru_params.N, ntru_params.d, ntru_params.d, rng)
        t, e = _timed(ntru_encrypt, ntru_keys, m_flat, phi=phi_n, mul=leaf)
        enc_ntru.append(t)
        t, out_n = _timed(ntru_decrypt, ntru_keys, e, mul=leaf)
        dec_ntru.append(t)
        ok &= bool(np.array_equal(out_n, m_flat))

    notes = []
    if not ok:
        notes.append("warning: at least one benchmark round trip failed")
    med = statistics.median
    return BenchReport(
        params=params,
        ntru_params=ntru_params,
        backend=backend,
        trials=trials,
        nnru=Timing(med(kg_nnru), med(enc_nnru), med(dec_nnru)),
        ntru=Timing(med(kg_ntru), med(enc_ntru), med(dec_ntru)),
        nnru_sizes=nnru_sizes(params),
        ntru_sizes=ntru_sizes(ntru_params),
        nnru_poly_muls_per_product=params.k**3,
        nnru_strassen_muls_per_product=strassen_mul_count(params.k),
        nnru_poly_muls_per_encrypt=muls_per_encrypt,
        ntru_poly_muls_per_encrypt=1,
        round_trips_ok=ok,
        notes=notes,
    )
