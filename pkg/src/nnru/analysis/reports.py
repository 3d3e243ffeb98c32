"""Machine-readable report files.

Per-trial experiments (gamma, failure, membership) write CSV with one row per
trial. Summary experiments (security, bench, attacks) write ``key=value``
lines. Every file carries a ``schema`` tag such as ``failure.v1`` so readers
can detect layout changes.
"""
from __future__ import annotations

import csv
import math
import os
from typing import Any, Iterable, Mapping, Sequence

from .attacks import MTAResult
from .bench import BenchReport
from .failure import FailureReport
from .lattice import MembershipReport
from .norms import GammaReport
from .security import BruteForceResult, SecurityReport

GAMMA_COLUMNS = ("schema", "trial", "gamma")
FAILURE_COLUMNS = (
    "schema", "trial", "success", "width", "min_coeff", "max_coeff",
    "b_std", "in_window", "width_exceeds_q",
)
MEMBERSHIP_COLUMNS = (
    "schema", "trial", "solved", "std", "baseline", "short", "uniform_like", "matches_fg",
)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def write_csv(path: str | os.PathLike, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_kv(path: str | os.PathLike, values: Mapping[str, Any]) -> None:
    with open(path, "w") as fh:
        for key, value in values.items():
            fh.write(f"{key}={_cell(value)}\n")


def read_kv(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                key, _, value = line.partition("=")
                out[key] = value
    return out


def gamma_rows(report: GammaReport):
    return [("gamma.v1", i, float(g)) for i, g in enumerate(report.samples)]


def failure_rows(report: FailureReport):
    return [
        ("failure.v1", r.index, r.success, r.width, r.min_coeff, r.max_coeff,
         r.b_std, r.in_window, r.width_exceeds_q)
        for r in report.records
    ]


def membership_rows(report: MembershipReport):
    return [
        ("membership.v1", r.index, r.solved, r.std, r.baseline, r.short, r.uniform_like, r.matches_fg)
        for r in report.records
    ]


def security_values(report: SecurityReport) -> dict[str, Any]:
    p = report.params
    return {
        "schema": "security.v1",
        "n": p.n, "k": p.k, "d_f": p.d_f, "d_phi": p.d_phi,
        "key_security": report.key_count,
        "key_mitm": report.key_mitm,
        "message_security": report.message_count,
        "message_mitm": report.message_mitm,
    }


def bench_values(report: BenchReport) -> dict[str, Any]:
    p, t = report.params, report.ntru_params
    a, b = report.nnru_sizes, report.ntru_sizes
    return {
        "schema": "bench.v1",
        "n": p.n, "k": p.k, "p": p.p, "q": p.q, "N": t.N,
        "backend": report.backend, "trials": report.trials,
        "nnru_plaintext_bits": a.plaintext_bits,
        "nnru_ciphertext_bits": a.ciphertext_bits,
        "nnru_private_key_bits": a.private_key_bits,
        "nnru_public_key_bits": a.public_key_bits,
        "ntru_plaintext_bits": b.plaintext_bits,
        "ntru_ciphertext_bits": b.ciphertext_bits,
        "ntru_private_key_bits": b.private_key_bits,
        "ntru_public_key_bits": b.public_key_bits,
        "message_expansion": a.message_expansion,
        "nnru_poly_muls_per_product": report.nnru_poly_muls_per_product,
        "nnru_strassen_muls_per_product": report.nnru_strassen_muls_per_product,
        "nnru_poly_muls_per_encrypt": report.nnru_poly_muls_per_encrypt,
        "ntru_poly_muls_per_encrypt": report.ntru_poly_muls_per_encrypt,
        "nnru_keygen_s": report.nnru.keygen,
        "nnru_encrypt_s": report.nnru.encrypt,
        "nnru_decrypt_s": report.nnru.decrypt,
        "ntru_keygen_s": report.ntru.keygen,
        "ntru_encrypt_s": report.ntru.encrypt,
        "ntru_decrypt_s": report.ntru.decrypt,
        "encrypt_speedup": report.encrypt_speedup,
        "decrypt_speedup": report.decrypt_speedup,
        "round_trips_ok": report.round_trips_ok,
    }


def mta_values(result: MTAResult) -> dict[str, Any]:
    out: dict[str, Any] = {"schema": "mta.v1", "differences": len(result.differences)}
    for i, ok in enumerate(result.clean, start=2):
        out[f"clean_{i}"] = ok
    out["all_clean"] = result.all_clean
    return out


def brute_values(result: BruteForceResult, recovered: bool | None = None) -> dict[str, Any]:
    return {
        "schema": "brute.v1",
        "searched": result.searched,
        "g_candidates": len(result.g_candidates),
        "f_candidates": len(result.f_candidates),
        "recovered": recovered,
    }
