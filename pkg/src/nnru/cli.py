"""Command-line front end.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O or format error,
3 cryptographic failure (keygen exhaustion, attack inapplicable).
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import analysis
from .analysis import reports
from .encoding import decode_message, encode_message
from .errors import (
    AttackInapplicableError,
    DecodeError,
    FormatError,
    KeygenError,
    MismatchError,
    NNRUError,
    NotInvertibleError,
    ParameterError,
    SearchSpaceError,
)
from .matrix import mat_inverse_mod_2e
from .params import Params, get_preset, validate_params
from .scheme import PrivateKey, PublicKey, decrypt, encrypt, keygen, sample_matrix, sample_message
from .serialization import (
    dump_file,
    dumps_ciphertexts,
    dumps_private_key,
    dumps_public_key,
    load_file,
)
from .streams import derive_rng, fresh_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CRYPTO = 3

MTA_KEY_ATTEMPTS = 100

_OVERRIDES = ("n", "k", "p", "q", "d_f", "d_w", "d_c", "d_phi")


class UsageError(Exception):
    pass


def _emit(lines) -> None:
    for line in lines:
        print(line)


def resolve_seed(args) -> int:
    """--seed, else NNRU_SEED, else fresh entropy. Always echoed."""
    seed = args.seed
    if seed is None:
        env = os.environ.get("NNRU_SEED")
        if env:
            try:
                seed = int(env, 0)
            except ValueError:
                raise UsageError(f"NNRU_SEED={env!r} is not an integer") from None
    if seed is None:
        seed = fresh_seed()
    if not 0 <= seed < 1 << 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    print(f"seed={seed}")
    return seed


def _has_param_flags(args) -> bool:
    return args.preset is not None or any(getattr(args, o) is not None for o in _OVERRIDES)


def build_params(args, default: str = "toy") -> Params:
    base = get_preset(args.preset or default)
    changes = {o: getattr(args, o) for o in _OVERRIDES if getattr(args, o) is not None}
    params = base.with_(**changes) if changes else base
    validate_params(params)
    return params


def _explicit_params(args) -> Optional[Params]:
    return build_params(args) if _has_param_flags(args) else None


def fingerprint(pub: PublicKey) -> str:
    return hashlib.sha256(dumps_public_key(pub)).hexdigest()[:16]


def _load(path, kind, params):
    obj = load_file(path, params)
    if not isinstance(obj, kind) and not (kind is list and isinstance(obj, list)):
        raise FormatError(f"{path}: expected a {kind.__name__} file")
    return obj


# subcommands


def cmd_keygen(args) -> int:
    params = build_params(args)
    _emit(validate_params(params).lines())
    seed = resolve_seed(args)
    pub, priv = keygen(params, derive_rng(seed, "keygen"))
    dump_file(args.pub, dumps_public_key(pub))
    dump_file(args.priv, dumps_private_key(priv))
    print(f"public key: {args.pub}")
    print(f"private key: {args.priv}")
    print(f"fingerprint={fingerprint(pub)}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pub = _load(args.pub, PublicKey, _explicit_params(args))
    seed = resolve_seed(args)
    with open(args.input, "rb") as fh:
        data = fh.read()
    rng = derive_rng(seed, "encrypt")
    blocks = [encrypt(pub, m, rng) for m in encode_message(data, pub.params)]
    dump_file(args.output, dumps_ciphertexts(blocks, pub.params))
    print(f"encrypted {len(data)} bytes into {len(blocks)} blocks: {args.output}")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    params = _explicit_params(args)
    priv = _load(args.priv, PrivateKey, params)
    blocks = _load(args.input, list, params)
    if blocks and blocks[0].params.shape_key != priv.params.shape_key:
        raise MismatchError("ciphertext and private key use different parameters")
    data = decode_message([decrypt(priv, ct) for ct in blocks], priv.params)
    dump_file(args.output, data)
    print(f"decrypted {len(blocks)} blocks into {len(data)} bytes: {args.output}")
    return EXIT_OK


def _analyze_gamma(args) -> int:
    n = args.n if args.n is not None else 107
    k = args.k if args.k is not None else 1
    d = args.d if args.d is not None else n // 3
    seed = resolve_seed(args)
    report = analysis.estimate_gamma(n, k, d, args.trials, seed, jobs=args.jobs)
    _emit(report.lines())
    if args.out:
        reports.write_csv(args.out, reports.GAMMA_COLUMNS, reports.gamma_rows(report))
    return EXIT_OK


def _analyze_failure(args) -> int:
    params = build_params(args)
    _emit(validate_params(params).lines())
    seed = resolve_seed(args)
    report = analysis.measure_failure_rate(params, args.trials, seed, jobs=args.jobs)
    _emit(report.lines())
    if args.out:
        reports.write_csv(args.out, reports.FAILURE_COLUMNS, reports.failure_rows(report))
    return EXIT_OK


def _analyze_security(args) -> int:
    report = analysis.security_report(build_params(args))
    _emit(report.lines())
    if args.out:
        reports.write_kv(args.out, reports.security_values(report))
    return EXIT_OK


def _analyze_membership(args) -> int:
    n = args.n if args.n is not None else 7
    k = args.k if args.k is not None else 1
    d = args.d if args.d is not None else 2
    seed = resolve_seed(args)
    report = analysis.membership_experiment(n, k, d, args.trials, seed, prime=args.prime, jobs=args.jobs)
    _emit(report.lines())
    if args.out:
        reports.write_csv(args.out, reports.MEMBERSHIP_COLUMNS, reports.membership_rows(report))
    return EXIT_OK


_ANALYZE = {
    "gamma": _analyze_gamma,
    "failure": _analyze_failure,
    "security": _analyze_security,
    "membership": _analyze_membership,
}


def cmd_analyze(args) -> int:
    return _ANALYZE[args.mode](args)


def cmd_bench(args) -> int:
    params = build_params(args)
    seed = resolve_seed(args)
    report = analysis.benchmark_compare(params, args.trials, seed, backend=args.backend)
    _emit(report.lines())
    if args.out:
        reports.write_kv(args.out, reports.bench_values(report))
    return EXIT_OK


def _attack_brute(args) -> int:
    params = build_params(args, default="toy-micro")
    seed = resolve_seed(args)
    planted = None
    if args.pub:
        pub = _load(args.pub, PublicKey, params)
    else:
        pub, planted = keygen(params, derive_rng(seed, "attack-keygen"))
    result = analysis.brute_force_attack(pub, params, args.budget)
    recovered = planted is not None and result.contains(planted.f, planted.g)
    print(f"brute: searched {result.searched} matrices")
    print(f"candidates: {len(result.g_candidates)} for g, {len(result.f_candidates)} for f")
    if planted is not None:
        print("planted key recovered" if recovered else "planted key NOT recovered")
    if args.out:
        reports.write_kv(args.out, reports.brute_values(result, recovered if planted is not None else None))
    return EXIT_OK


def _attack_mta(args) -> int:
    params = build_params(args, default="toy")
    if args.count < 2:
        raise UsageError("--count must be at least 2")
    seed = resolve_seed(args)
    rng = derive_rng(seed, "attack-mta")
    # the attack needs h invertible mod q, which holds only when w is
    for discarded in range(MTA_KEY_ATTEMPTS):
        pub, _ = keygen(params, rng)
        try:
            mat_inverse_mod_2e(pub.h, params.q_exponent)
            break
        except NotInvertibleError:
            continue
    else:
        raise AttackInapplicableError(f"no key with invertible h in {MTA_KEY_ATTEMPTS} draws")
    print(f"keys discarded for non-invertible h: {discarded}")
    m = sample_message(params, rng)
    phis = [sample_matrix(params.k, params.n, params.d_phi, rng) for _ in range(args.count)]
    cts = [encrypt(pub, m, phi=phi) for phi in phis]
    result = analysis.multiple_transmission_attack(cts, pub.h, params)
    _emit(result.lines())
    verified = all(np.array_equal(d, phi - phis[0]) for d, phi in zip(result.differences, phis[1:]))
    print("differences match ground truth" if verified else "differences DO NOT match ground truth")
    if args.out:
        values = reports.mta_values(result)
        values["verified"] = verified
        reports.write_kv(args.out, values)
    return EXIT_OK


_ATTACK = {"brute": _attack_brute, "mta": _attack_mta}


def cmd_attack(args) -> int:
    return _ATTACK[args.mode](args)


# parser


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="toy-micro | toy | small | reference")
    for flag in _OVERRIDES:
        p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=int)


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed (default: $NNRU_SEED or fresh)")


def _add_run(p: argparse.ArgumentParser, trials: int) -> None:
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="write the machine-readable report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nnru", description="Matrix NTRU-style encryption and experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    _add_params(p)
    _add_seed(p)
    p.add_argument("--pub", default="nnru.pub")
    p.add_argument("--priv", default="nnru.key")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file")
    _add_params(p)
    _add_seed(p)
    p.add_argument("--pub", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file")
    _add_params(p)
    p.add_argument("--priv", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("analyze", help="run an experiment")
    modes = p.add_subparsers(dest="mode", required=True)
    m = modes.add_parser("gamma", help="width / norm ratio of products")
    m.add_argument("--n", type=int)
    m.add_argument("--k", type=int)
    m.add_argument("--d", type=int)
    _add_seed(m)
    _add_run(m, 1000)
    m = modes.add_parser("failure", help="Monte-Carlo decryption failure rate")
    _add_params(m)
    _add_seed(m)
    _add_run(m, 1000)
    m = modes.add_parser("security", help="brute-force search-space sizes")
    _add_params(m)
    m.add_argument("--out")
    m = modes.add_parser("membership", help="solve S h = f h g over a prime field")
    m.add_argument("--n", type=int)
    m.add_argument("--k", type=int)
    m.add_argument("--d", type=int)
    m.add_argument("--prime", type=int, default=analysis.lattice.DEFAULT_PRIME)
    _add_seed(m)
    _add_run(m, 200)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="compare against NTRU with N = n k^2")
    _add_params(p)
    _add_seed(p)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--backend", choices=analysis.bench.BACKENDS, default="schoolbook")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("attack", help="run an attack on toy keys")
    modes = p.add_subparsers(dest="mode", required=True)
    m = modes.add_parser("brute", help="exhaustive key search")
    _add_params(m)
    _add_seed(m)
    m.add_argument("--pub", help="attack this public key instead of a fresh one")
    m.add_argument("--budget", type=int, default=10**6)
    m.add_argument("--out")
    m = modes.add_parser("mta", help="same message sent several times")
    _add_params(m)
    _add_seed(m)
    m.add_argument("--count", type=int, default=5)
    m.add_argument("--out")
    p.set_defaults(func=cmd_attack)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParameterError, SearchSpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError, MismatchError, DecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KeygenError, AttackInapplicableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except NNRUError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
