import csv
import itertools
import math

import numpy as np
import pytest

from nnru.analysis import (
    benchmark_compare,
    brute_force_attack,
    estimate_gamma,
    key_security,
    measure_failure_rate,
    membership_experiment,
    message_security,
    multiple_transmission_attack,
    security_report,
    shift_module_solution,
    strassen_mul_count,
    ternary_count,
    uniform_baseline,
)
from nnru.analysis import reports
from nnru.analysis.lattice import shift_matrix, solve_mod_prime
from nnru.errors import AttackInapplicableError, NotInvertibleError, ParameterError, SearchSpaceError
from nnru.matrix import identity_matrix, mat_inverse_mod_2e, mat_mul, mat_reduce, zero_matrix
from nnru.params import Params, get_preset
from nnru.scheme import PublicKey, encrypt, keygen, sample_key_matrix, sample_matrix, sample_message
from nnru.streams import derive_rng


def enumerate_ternary(n, d):
    return sum(
        1 for v in itertools.product((-1, 0, 1), repeat=n) if v.count(1) == d and v.count(-1) == d
    )


# gamma


def test_gamma_report_invariants():
    r = estimate_gamma(31, 1, 10, 100, seed=1)
    assert r.trials == 100 and len(r.samples) == 100
    assert 0 <= r.min <= r.gamma1 <= r.median <= r.gamma2 <= r.max
    assert any("median" in line for line in r.lines())


def test_gamma_deterministic_and_order_independent():
    a = estimate_gamma(23, 2, 5, 100, seed=3)
    b = estimate_gamma(23, 2, 5, 100, seed=3, jobs=2)
    np.testing.assert_array_equal(a.samples, b.samples)


def test_gamma_rejects_few_trials():
    with pytest.raises(ParameterError):
        estimate_gamma(31, 1, 10, 99, seed=1)


# failure


def test_failure_huge_q_never_fails(toy):
    r = measure_failure_rate(toy.with_(q=2**16), 100, seed=1)
    assert r.failures == 0 and r.out_of_window == 0


def test_failure_criterion_with_forced_failures(toy):
    r = measure_failure_rate(toy.with_(q=64), 200, seed=2)
    assert 0 < r.failures < r.trials
    assert r.criterion_mismatches == []
    # a width above q can never fit the window
    assert all(not t.success for t in r.records if t.width_exceeds_q)
    assert r.wide <= r.failures


def test_failure_report_fields(toy):
    r = measure_failure_rate(toy, 20, seed=3)
    assert r.trials == 20
    assert r.predicted.sigma > 0 and r.measured_sigma > 0
    assert [t.index for t in r.records] == list(range(20))
    assert measure_failure_rate(toy, 20, seed=3, jobs=2).records == r.records


# security


def test_ternary_count_matches_enumeration():
    for n in range(1, 9):
        for d in range(0, 3):
            if 2 * d <= n:
                assert ternary_count(n, d) == enumerate_ternary(n, d)


@pytest.mark.parametrize(
    "n,d,k", [(n, d, k) for n in range(1, 9) for d in range(3) for k in (1, 2) if 2 * d <= n]
)
def test_security_counts(n, d, k):
    params = Params(n, k, 3, 256, d, d, d, d)
    per_poly = enumerate_ternary(n, d)
    assert key_security(params) == per_poly ** (2 * k * k)
    assert message_security(params) == per_poly ** (2 * k * k)


def test_security_count_by_full_pair_enumeration():
    # n=3, d=1, k=1: every (f, g) pair listed explicitly
    polys = [v for v in itertools.product((-1, 0, 1), repeat=3) if v.count(1) == 1 and v.count(-1) == 1]
    assert key_security(Params(3, 1, 3, 64, 1, 1, 1, 1)) == len(list(itertools.product(polys, polys)))


def test_security_examples():
    assert key_security(Params(5, 1, 3, 256, 1, 1, 1, 1)) == 400
    assert message_security(Params(5, 1, 3, 256, 1, 1, 1, 1)) == 400
    assert key_security(Params(5, 1, 3, 256, 0, 1, 1, 0)) == 1
    assert message_security(Params(5, 1, 3, 256, 0, 1, 1, 0)) == 1
    assert ternary_count(7, 2) == 210 == math.comb(7, 2) * math.comb(5, 2)
    assert key_security(get_preset("toy")) == 210**8


@pytest.mark.parametrize("name", ["toy", "small", "reference"])
def test_mitm_estimate(name):
    r = security_report(get_preset(name))
    assert r.key_mitm**2 <= r.key_count < (r.key_mitm + 1) ** 2
    assert r.message_mitm**2 <= r.message_count < (r.message_mitm + 1) ** 2


# brute force


@pytest.mark.parametrize("params", [get_preset("toy-micro"), Params(3, 2, 3, 64, 1, 1, 1, 1)])
def test_brute_force_recovers_planted_key(params):
    for seed in range(3):
        pub, priv = keygen(params, derive_rng(seed, "brute"))
        result = brute_force_attack(pub, params, 10**7)
        assert result.contains(priv.f, priv.g)
        for g in result.g_candidates:
            assert np.abs(mat_reduce(mat_mul(pub.h, g), params.q, centered=True)).max() <= 1


def test_brute_force_narrows_the_search():
    params = Params(3, 2, 3, 64, 1, 1, 1, 1)
    pub, _ = keygen(params, derive_rng(0, "brute"))
    result = brute_force_attack(pub, params, 10**7)
    assert result.searched == 3**2 * 6**2
    assert len(result.g_candidates) < result.searched


def test_brute_force_budget(toy, toy_keys):
    with pytest.raises(SearchSpaceError):
        brute_force_attack(toy_keys[0], toy, 10**6)
    micro = get_preset("toy-micro")
    pub, _ = keygen(micro, derive_rng(0))
    with pytest.raises(SearchSpaceError):
        brute_force_attack(pub, micro, 0)


def test_brute_force_zero_key_flags_everything():
    params = Params(3, 2, 3, 64, 1, 1, 1, 1)
    z = zero_matrix(2, 3)
    result = brute_force_attack(PublicKey(z, z, params), params, 10**7)
    assert len(result.g_candidates) == len(result.f_candidates) == result.searched


# multiple transmission


@pytest.fixture(scope="module")
def mta_keys():
    # w needs no inverse, so h is invertible only for some keys
    toy = get_preset("toy")
    for seed in range(100):
        pub, priv = keygen(toy, derive_rng(seed, "mta-keys"))
        try:
            mat_inverse_mod_2e(pub.h, toy.q_exponent)
        except NotInvertibleError:
            continue
        return pub, priv
    raise AssertionError("no key with invertible h")


def test_mta_recovers_phi_differences(toy, mta_keys):
    pub, _ = mta_keys
    rng = derive_rng(8, "mta")
    m = sample_message(toy, rng)
    phis = [sample_matrix(toy.k, toy.n, toy.d_phi, rng) for _ in range(5)]
    cts = [encrypt(pub, m, phi=phi) for phi in phis]
    result = multiple_transmission_attack(cts, pub.h, toy)
    assert result.all_clean
    for delta, phi in zip(result.differences, phis[1:]):
        np.testing.assert_array_equal(delta, phi - phis[0])
    same = multiple_transmission_attack([cts[0], cts[0]], pub.h, toy)
    assert not same.differences[0].any()


def test_mta_different_messages_not_clean(toy, mta_keys):
    pub, _ = mta_keys
    rng = derive_rng(9, "mta")
    cts = [encrypt(pub, sample_message(toy, rng), rng) for _ in range(2)]
    result = multiple_transmission_attack(cts, pub.h, toy)
    assert not result.all_clean
    assert "not a clean difference" in "\n".join(result.lines())


def test_mta_needs_invertible_h(toy):
    with pytest.raises(AttackInapplicableError):
        multiple_transmission_attack([zero_matrix(2, 7)] * 2, zero_matrix(2, 7), toy)
    with pytest.raises(ParameterError):
        multiple_transmission_attack([zero_matrix(2, 7)], identity_matrix(2, 7), toy)


# shift module


def test_shift_matrix_is_right_multiplication():
    rng = derive_rng(1)
    h = rng.integers(0, 257, size=(2, 2, 5))
    S = rng.integers(0, 257, size=(2, 2, 5))
    L = shift_matrix(h, 257)
    np.testing.assert_array_equal(np.mod(S.ravel() @ L, 257), mat_reduce(mat_mul(S, h), 257).ravel())


def test_solve_mod_prime():
    A = np.array([[1, 2], [3, 4]])
    x = solve_mod_prime(A, np.array([5, 6]), 7)
    np.testing.assert_array_equal(np.mod(A @ x, 7), [5, 6])
    assert solve_mod_prime(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 7) is None


def test_identity_target_gives_identity():
    k, n = 2, 7
    h = sample_key_matrix(k, n, 2, derive_rng(3))
    S, norm = shift_module_solution(h, h)
    np.testing.assert_array_equal(S, identity_matrix(k, n))
    # the centered norm subtracts the global mean k / (n k^2)
    assert norm == pytest.approx(math.sqrt(k - 1 / n))


def test_commutative_case_solution_is_f_g():
    n, prime = 7, 257
    rng = derive_rng(4)
    f, g, h = (sample_key_matrix(1, n, 2, rng) for _ in range(3))
    h = mat_reduce(h, prime)
    target = mat_reduce(mat_mul(mat_mul(f, h), g), prime)
    S, norm = shift_module_solution(h, target, prime)
    np.testing.assert_array_equal(S, mat_mul(f, g))
    assert norm <= 0.3 * uniform_baseline(prime) * math.sqrt(n)


def test_membership_small_runs():
    short = membership_experiment(7, 1, 2, 20, seed=1)
    assert short.short_fraction == 1.0 and short.verdict == "short"
    assert all(r.matches_fg for r in short.records)
    wide = membership_experiment(7, 2, 2, 20, seed=1, jobs=2)
    assert wide.uniform_fraction >= 0.9 and wide.verdict == "non-short"
    with pytest.raises(ParameterError):
        membership_experiment(7, 1, 2, 5, seed=1, prime=256)


# benchmark


@pytest.mark.parametrize("k,expected", [(1, 1), (2, 7), (3, 49), (4, 49), (8, 343)])
def test_strassen_mul_count(k, expected):
    assert strassen_mul_count(k) == expected


def test_benchmark_report(toy):
    r = benchmark_compare(toy, 10, seed=1)
    nk2 = 28
    assert r.nnru_sizes.plaintext_bits == nk2 * math.log2(3)
    assert r.nnru_sizes.ciphertext_bits == nk2 * 9
    assert r.nnru_sizes.private_key_bits == 2 * nk2 * math.log2(3)
    assert r.nnru_sizes.public_key_bits == 2 * nk2 * 9
    assert r.nnru_sizes.message_expansion == pytest.approx(math.log(512, 3))
    assert r.ntru_sizes.public_key_bits == nk2 * 9
    assert r.nnru_poly_muls_per_product == 8
    assert r.nnru_strassen_muls_per_product == 7
    assert r.nnru_poly_muls_per_encrypt == 16
    assert r.round_trips_ok
    assert r.encrypt_speedup > 0
    assert any("Message expansion" in line for line in r.lines())


def test_benchmark_strassen_backend(toy):
    r = benchmark_compare(toy, 10, seed=1, backend="strassen")
    assert r.nnru_poly_muls_per_encrypt == 2 * 7
    assert r.round_trips_ok
    with pytest.raises(ParameterError):
        benchmark_compare(toy, 10, seed=1, backend="fft")
    with pytest.raises(ParameterError):
        benchmark_compare(toy, 5, seed=1)


# report files


def test_csv_and_kv_reports(tmp_path, toy):
    g = estimate_gamma(31, 1, 10, 100, seed=1)
    path = tmp_path / "g.csv"
    reports.write_csv(path, reports.GAMMA_COLUMNS, reports.gamma_rows(g))
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 100 and rows[0]["schema"] == "gamma.v1"
    assert float(rows[5]["gamma"]) == pytest.approx(g.samples[5])

    f = measure_failure_rate(toy, 5, seed=1)
    path = tmp_path / "f.csv"
    reports.write_csv(path, reports.FAILURE_COLUMNS, reports.failure_rows(f))
    rows = list(csv.DictReader(path.open()))
    assert tuple(rows[0]) == reports.FAILURE_COLUMNS
    assert [int(r["width"]) for r in rows] == [t.width for t in f.records]

    path = tmp_path / "s.txt"
    reports.write_kv(path, reports.security_values(security_report(toy)))
    values = reports.read_kv(path)
    assert values["schema"] == "security.v1"
    assert int(values["key_security"]) == 210**8


@pytest.mark.parametrize("name", ["toy", "small"])
def test_product_adjusted_sigma_tracks_measurement(name):
    # the norm of a product of k x k matrices is about |M1| |M2| / k, so the
    # adjusted prediction is the one that should match the measured spread
    params = get_preset(name)
    r = measure_failure_rate(params, 60, seed=7)
    adjusted = r.predicted.sigma_product_adjusted
    assert abs(r.measured_sigma - adjusted) / adjusted < 0.1
