import math

import numpy as np
import pytest

from uniformity_lab import arith
from uniformity_lab.errors import PreconditionError


def trial_division_primes(n_max):
    """Independent oracle: primality by trial division."""
    out = []
    for n in range(2, n_max + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


def factorize(n):
    """Oracle factorization for small n."""
    factors = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


class TestBuildTables:
    def test_rejects_tiny_bound(self):
        with pytest.raises(PreconditionError):
            arith.build_tables(1)

    def test_primes_up_to_ten(self, tables_small):
        assert list(tables_small.primes[:4]) == [2, 3, 5, 7]

    def test_primes_match_trial_division(self, tables_small):
        oracle = trial_division_primes(10_000)
        assert list(tables_small.primes) == oracle

    def test_prime_counting_million(self, tables_large):
        assert tables_large.prime_pi(1_000_000) == 78498

    def test_lambda_prime_power_values(self, tables_small):
        assert tables_small.von_mangoldt[8] == pytest.approx(math.log(2), rel=1e-12)
        assert tables_small.von_mangoldt[9] == pytest.approx(math.log(3), rel=1e-12)
        assert tables_small.von_mangoldt[12] == 0.0
        assert tables_small.von_mangoldt[0] == 0.0
        assert tables_small.von_mangoldt[1] == 0.0

    def test_lambda_against_factorization_oracle(self, tables_small):
        for n in range(2, 2000):
            factors = factorize(n)
            expected = math.log(next(iter(factors))) if len(factors) == 1 else 0.0
            assert tables_small.von_mangoldt[n] == pytest.approx(expected, abs=1e-12)

    def test_phi_at_primes(self, tables_small):
        for p in tables_small.primes[:200]:
            assert tables_small.phi[p] == p - 1

    def test_phi_multiplicative_on_coprime_pairs(self, tables_small, rng):
        for _ in range(200):
            a = int(rng.integers(2, 90))
            b = int(rng.integers(2, 90))
            if math.gcd(a, b) != 1:
                continue
            assert tables_small.phi[a * b] == tables_small.phi[a] * tables_small.phi[b]


class TestLambdaPrime:
    def test_primes_get_log_n(self, tables_small):
        assert arith.lambda_prime(7, tables_small) == pytest.approx(math.log(7))

    def test_higher_prime_powers_get_zero(self, tables_small):
        assert arith.lambda_prime(8, tables_small) == 0.0
        assert arith.lambda_prime(1, tables_small) == 0.0

    def test_out_of_range(self, tables_small):
        with pytest.raises(PreconditionError):
            arith.lambda_prime(10_001, tables_small)
        with pytest.raises(PreconditionError):
            arith.lambda_prime(0, tables_small)


class TestVmGap:
    def test_no_higher_powers_below_two(self, tables_small):
        gap, bound = arith.vm_gap_check(2, tables_small)
        assert gap == 0.0
        assert bound >= 0.0

    def test_gap_at_hundred_matches_summation_oracle(self, tables_small):
        # direct summation over n < 100 of Lambda at higher prime powers
        expected = 0.0
        for n in range(2, 100):
            factors = factorize(n)
            if len(factors) == 1:
                p, m = next(iter(factors.items()))
                if m >= 2:
                    expected += math.log(p)
        gap, bound = arith.vm_gap_check(100, tables_small)
        assert gap == pytest.approx(expected / 100, rel=1e-12)
        assert 0.0 <= gap <= bound

    @pytest.mark.parametrize("n", [10**3, 10**4, 10**5, 10**6])
    def test_gap_within_bounds(self, tables_large, n):
        gap, bound = arith.vm_gap_check(n, tables_large)
        assert 0.0 <= gap <= bound
        assert gap <= 3.0 / math.sqrt(n)


class TestWProduct:
    @pytest.mark.parametrize("w,expected", [(1, 1), (2, 1), (3, 2), (5, 6), (11, 210), (13, 2310)])
    def test_small_products(self, w, expected):
        assert arith.w_of(w) == expected

    def test_overflow_is_explicit(self):
        with pytest.raises(OverflowError):
            arith.w_of(400)

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            arith.w_of(0)


class TestLambdaTilde:
    def test_degenerate_w_equals_plain_lambda(self, tables_small):
        for n in range(1, 200):
            assert arith.lambda_tilde(2, 0, n, tables_small) == pytest.approx(
                float(tables_small.von_mangoldt[n]), abs=1e-15
            )

    def test_direct_substitution_w3(self, tables_small):
        # W = 2, phi(2) = 1, so the value at n = 1, r = 1 is Lambda(3)/2
        assert arith.lambda_tilde(3, 1, 1, tables_small) == pytest.approx(math.log(3) / 2)

    def test_direct_substitution_w5(self, tables_small):
        # W = 6, phi(6) = 2: value at n = 2, r = 1 is (1/3) Lambda(13)
        assert arith.lambda_tilde(5, 1, 2, tables_small) == pytest.approx(math.log(13) / 3)

    def test_out_of_table_range(self, tables_small):
        with pytest.raises(PreconditionError):
            arith.lambda_tilde(5, 1, 10_000, tables_small)

    def test_mean_is_near_one(self, tables_large):
        # unrestricted W-tricked weight has mean close to 1 over [0, N)
        n_mod, w, r = 9973, 5, 1
        big_w = arith.w_of(w)
        idx = big_w * np.arange(n_mod, dtype=np.int64) + r
        mean = float(
            np.mean(tables_large.phi[big_w] / big_w * tables_large.von_mangoldt[idx])
        )
        assert abs(mean - 1.0) < 0.1


class TestRestrictToZn:
    def test_rejects_composite_modulus(self, tables_small):
        with pytest.raises(PreconditionError):
            arith.restrict_to_zn(2, 1, 9, tables_small)

    def test_rejects_r_sharing_factor_with_w(self, tables_small):
        with pytest.raises(PreconditionError):
            arith.restrict_to_zn(5, 3, 31, tables_small)

    def test_tiny_case_single_cell(self, tables_small):
        seq = arith.restrict_to_zn(2, 1, 5, tables_small)
        # cutoff floor(5/3) = 1: only n = 0 can be nonzero, Lambda(1) - 1 = -1
        assert seq.values[0] == pytest.approx(-1.0)
        assert np.all(seq.values[1:] == 0)

    def test_support_size_matches_cutoff(self, tables_large):
        n_mod = 997
        for den in (2, 3, 4):
            seq = arith.restrict_to_zn(5, 1, n_mod, tables_large, cutoff_den=den)
            assert np.all(seq.values[n_mod // den :] == 0)
            # entries below the cutoff are generically nonzero (weight - 1)
            nonzero = np.count_nonzero(seq.values)
            assert nonzero <= n_mod // den
            assert nonzero >= n_mod // den - 5

    def test_lambda_mean_desk_scale(self, tables_large):
        lam = tables_large.von_mangoldt[:1_000_000]
        assert abs(float(lam.sum()) / 1_000_000 - 1.0) <= 0.02
