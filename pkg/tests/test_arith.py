from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from unitary_redheffer import arith
from unitary_redheffer.arith import (
    build_omega_table, histogram_from_table, is_unitary_divisor, k_from_primorials,
    k_sequence, mertens_star, mertens_star_coprime, mu_star, omega_histogram, primorial,
    stirling2_table, unitary_convolve, unitary_divisors,
)
from unitary_redheffer.errors import ContractError, ResourceGuardError

import oracles


@pytest.fixture(scope="module")
def table():
    return build_omega_table(10**5)


def test_omega_small_examples():
    assert build_omega_table(1).omega[1:].tolist() == [0]
    assert build_omega_table(8).omega[1:].tolist() == [oracles.omega_trial(m) for m in range(1, 9)]
    assert build_omega_table(8).omega[1:].tolist() == [0, 1, 1, 1, 1, 2, 1, 1]
    assert build_omega_table(60).omega[60] == 3


def test_omega_matches_trial_division(table):
    ref = [oracles.omega_trial(m) for m in range(1, 10**4 + 1)]
    assert table.omega[1 : 10**4 + 1].tolist() == ref


def test_spf_on_primes(table):
    primes = arith.small_primes(10**5)
    assert np.all(table.omega[primes] == 1)
    assert np.all(table.spf[primes] == primes)
    m = np.arange(2, 10**5 + 1)
    assert np.all(m % table.spf[2:] == 0)


def test_table_guards():
    with pytest.raises(ContractError):
        build_omega_table(0)
    with pytest.raises(ResourceGuardError):
        build_omega_table(2**31 + 1)


def test_mu_star():
    t = build_omega_table(10)
    assert [mu_star(t, m) for m in (1, 6, 8)] == [1, 1, -1]
    with pytest.raises(ContractError):
        mu_star(t, 11)
    with pytest.raises(ContractError):
        mu_star(t, 0)


def test_is_unitary_divisor():
    assert is_unitary_divisor(1, 8)
    assert not is_unitary_divisor(2, 8)
    assert is_unitary_divisor(2, 6)
    assert not is_unitary_divisor(5, 6)
    with pytest.raises(ContractError):
        is_unitary_divisor(0, 3)


def test_unitary_divisors_examples():
    assert unitary_divisors(1) == [1]
    assert unitary_divisors(8) == [1, 8]
    assert unitary_divisors(12) == [1, 3, 4, 12]


def test_unitary_divisors_brute(table):
    for m in range(1, 2001):
        divs = unitary_divisors(m)
        assert divs == oracles.unitary_divisors_brute(m)
        assert len(divs) == 2 ** int(table.omega[m])


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_unitary_divisor_symmetry(i, j):
    # i ∥ ij exactly when gcd(i, j) = 1
    m = i * j
    assert is_unitary_divisor(i, m) == is_unitary_divisor(j, m)


def test_unitary_mobius_identity(table):
    n = 10**4
    conv = unitary_convolve(table.mu_star[1 : n + 1].tolist(), [1] * n)
    assert conv[0] == 1
    assert not any(conv[1:])


def test_unitary_convolve_counts_divisors():
    ones = [1] * 12
    assert unitary_convolve(ones, ones)[11] == 4
    with pytest.raises(ContractError):
        unitary_convolve([1, 2], [1])


def test_unitary_convolve_exact_values():
    f = [Fraction(1, k) for k in range(1, 31)]
    g = list(range(1, 31))
    out = unitary_convolve(f, g)
    for m in range(1, 31):
        assert out[m - 1] == sum(Fraction(1, d) * (m // d) for d in oracles.unitary_divisors_brute(m))


def test_mertens_star_examples():
    t = build_omega_table(8)
    assert mertens_star(t, 1) == 1
    assert mertens_star(t, 8) == -4
    assert mertens_star(t, 2) == 0
    with pytest.raises(ContractError):
        mertens_star(t, 9)


def test_mertens_star_brute(table):
    for x in range(1, 500):
        assert mertens_star(table, x) == oracles.mertens_star_brute(x)


def test_mertens_star_coprime_examples():
    t = build_omega_table(8)
    assert mertens_star_coprime(t, 4, 2) == 0
    assert mertens_star_coprime(t, 2, 4) == 1
    assert mertens_star_coprime(t, 8, 1) == -4
    assert mertens_star_coprime(t, Fraction(8, 3), 3) == mertens_star_coprime(t, 2, 3)
    assert mertens_star_coprime(t, 2.9, 3) == 0


def test_lemma_unitary_inversion(table):
    for i in range(1, 101):
        for j in range(1, 101):
            s = sum(int(table.mu_star[d]) for d in unitary_divisors(j) if is_unitary_divisor(i, j // d))
            assert s == (i == j)


def test_lemma_coprime_mertens_sum():
    t = build_omega_table(200)
    for n in range(1, 201):
        col = [0] + [mertens_star_coprime(t, Fraction(n, k), k) for k in range(1, n + 1)]
        for i in range(1, n + 1):
            assert sum(col[k] for k in range(i, n + 1, i) if is_unitary_divisor(i, k)) == 1


def test_histogram_examples():
    assert omega_histogram(8, 2).counts == (1, 6, 1)
    assert omega_histogram(1, 2).counts == (1,)
    assert omega_histogram(30).count(3) == 1


@pytest.mark.parametrize("seg", [2, 16, 1024])
def test_histogram_segment_sizes(table, seg):
    xs = [1, 2, 3, 29, 30, 31, 210, 1000, 2310] + ([10**5] if seg > 2 else [20000])
    for x in xs:
        assert omega_histogram(x, seg) == histogram_from_table(table, x)


def test_histogram_invariants(table):
    h = omega_histogram(10**5, 4096)
    assert sum(h.counts) == 10**5
    for j in range(len(h.counts) + 3):
        if primorial(j) > 10**5:
            assert h.count(j) == 0


def test_histogram_workers_deterministic():
    assert omega_histogram(50_000, 999, workers=4) == omega_histogram(50_000, 999, workers=1)


def test_histogram_bad_args():
    with pytest.raises(ContractError):
        omega_histogram(0)
    with pytest.raises(ContractError):
        omega_histogram(10, 1)


def test_mertens_from_histogram(table):
    for x in (1, 7, 100, 9999, 10**5):
        h = histogram_from_table(table, x)
        assert mertens_star(table, x) == sum((-1) ** j * c for j, c in enumerate(h.counts))


def test_stirling_examples():
    st_ = stirling2_table(6, 6)
    assert st_(0, 0) == 1
    assert st_(2, 2) == 1
    assert st_(3, 2) == 3
    assert st_(4, 2) == 7
    assert all(st_(n, 0) == 0 for n in range(1, 7))
    assert st_(2, 5) == 0


def test_stirling_enumeration():
    st_ = stirling2_table(7, 7)
    for n in range(8):
        for k in range(8):
            assert st_(n, k) == oracles.set_partitions_count(n, k)


def test_stirling_recurrence_big():
    st_ = stirling2_table(80, 40)
    for n in range(1, 81):
        for k in range(1, 41):
            assert st_(n, k) == k * st_(n - 1, k) + st_(n - 1, k - 1)
    assert st_(80, 40) > 2**64  # exact big integers


def test_primorial():
    assert primorial(0) == 1
    assert primorial(3) == 30
    assert primorial(5) == 2310
    assert primorial(12) == 7420738134810
    with pytest.raises(ContractError):
        primorial(-1)


def test_k_sequence_examples():
    t = build_omega_table(30)
    assert [k_sequence(t, n) for n in (1, 2, 8, 30)] == [0, 2, 3, 4]


def test_k_sequence_recurrence(table):
    k = 0
    for n in range(1, 5001):
        if n >= 2:
            k = max(k, oracles.omega_trial(n) + 1)
        assert k_sequence(table, n) == k


def test_k_sequence_primorial_characterization():
    t = build_omega_table(10**6)
    ks = t.k_values[2:]
    prims = oracles.primorials_upto(10**6)
    n = np.arange(2, 10**6 + 1)
    # N_{k-1} <= n < N_k
    lo = np.array(prims)[ks - 1]
    hi = np.array(prims)[ks]
    assert np.all((lo <= n) & (n < hi))
    for n in (2, 5, 6, 29, 30, 209, 210, 2309, 2310, 10**6):
        assert k_from_primorials(n) == k_sequence(t, n)
