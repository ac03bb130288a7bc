import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniformity_lab._util import cexp, unit_disc
from uniformity_lab.errors import PreconditionError, ResourceError
from uniformity_lab.znz import ZnSeq, expectation, gowers_norm, gvn_check


def make_seq(rng, n):
    return ZnSeq(rng.standard_normal(n) + 1j * rng.standard_normal(n))


class TestZnSeq:
    def test_rejects_empty(self):
        with pytest.raises(PreconditionError):
            ZnSeq([])

    def test_rejects_nan(self):
        with pytest.raises(PreconditionError):
            ZnSeq([1.0, float("nan")])

    def test_rejects_inf(self):
        with pytest.raises(PreconditionError):
            ZnSeq([1.0, complex(0, float("inf"))])

    def test_shift_wraps(self):
        f = ZnSeq([0, 1, 2, 3])
        assert list(f.shift(1).values.real) == [1, 2, 3, 0]
        assert list(f.shift(-1).values.real) == [3, 0, 1, 2]
        assert list(f.shift(5).values.real) == [1, 2, 3, 0]


class TestExpectation:
    def test_constant(self):
        assert expectation(ZnSeq(np.full(9, 2.5 - 1j))) == pytest.approx(2.5 - 1j)

    def test_point_mass(self):
        f = ZnSeq([1, 0, 0, 0, 0, 0, 0, 0])
        assert expectation(f) == pytest.approx(1 / 8)

    def test_character_sums_to_zero(self):
        n = 12
        f = ZnSeq(cexp(np.arange(n) / n))
        assert abs(expectation(f)) < 1e-14


class TestGowersNormClosedForms:
    def test_constant_sequence_has_norm_one(self):
        f = ZnSeq(np.ones(11))
        for d in (1, 2, 3, 4):
            assert gowers_norm(f, d).value == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("strategy", ["recursive", "bruteforce"])
    def test_point_mass_closed_forms(self, strategy):
        # only the all-zero parallelepiped survives: U_d = N^{-(d+1)/2^d}
        f = ZnSeq([1, 0, 0, 0, 0])
        assert gowers_norm(f, 2, strategy).value == pytest.approx(5 ** -0.75, abs=1e-12)
        assert gowers_norm(f, 3, strategy).value == pytest.approx(5 ** -0.5, abs=1e-12)

    def test_quadratic_phase_norm(self):
        # e(n^2/N) on a prime modulus: every Fourier coefficient has size
        # N^{-1/2}, so U_2 = N^{-1/4} exactly
        n = 17
        f = ZnSeq(cexp(np.arange(n) ** 2 / n))
        rec = gowers_norm(f, 2, "recursive").value
        fou = gowers_norm(f, 2, "fourier").value
        assert rec == pytest.approx(17 ** -0.25, abs=1e-12)
        assert abs(rec - fou) <= 1e-10

    def test_linear_character_is_perfectly_structured(self):
        n = 32
        f = ZnSeq(cexp(3 * np.arange(n) / n))
        assert gowers_norm(f, 2).value == pytest.approx(1.0, abs=1e-12)
        assert gowers_norm(f, 1).value == pytest.approx(0.0, abs=1e-12)


class TestStrategyValidation:
    def test_fourier_only_d2(self):
        f = ZnSeq(np.ones(8))
        with pytest.raises(PreconditionError):
            gowers_norm(f, 3, "fourier")

    def test_bruteforce_cap(self, rng):
        f = make_seq(rng, 257)
        with pytest.raises(ResourceError):
            gowers_norm(f, 2, "bruteforce")

    def test_order_range(self, rng):
        f = make_seq(rng, 8)
        with pytest.raises(PreconditionError):
            gowers_norm(f, 0)
        with pytest.raises(PreconditionError):
            gowers_norm(f, 5)

    def test_unknown_strategy(self, rng):
        with pytest.raises(PreconditionError):
            gowers_norm(make_seq(rng, 8), 2, "magic")


class TestStrategyAgreement:
    def test_recursive_vs_bruteforce_sample(self, rng):
        for i in range(60):
            n = int(rng.integers(2, 65))
            d = int(rng.integers(1, 4))
            f = make_seq(rng, n)
            a = gowers_norm(f, d, "recursive").value
            b = gowers_norm(f, d, "bruteforce").value
            assert abs(a - b) <= 1e-10 * max(1.0, a)

    def test_recursive_vs_fourier_medium(self, rng):
        for n in (31, 64, 257, 1009):
            for _ in range(5):
                f = make_seq(rng, n)
                a = gowers_norm(f, 2, "recursive").value
                b = gowers_norm(f, 2, "fourier").value
                assert abs(a - b) <= 1e-10 * max(1.0, a)

    def test_u4_headroom_agrees(self, rng):
        for _ in range(5):
            f = make_seq(rng, int(rng.integers(2, 13)))
            a = gowers_norm(f, 4, "recursive").value
            b = gowers_norm(f, 4, "bruteforce").value
            assert abs(a - b) <= 1e-10 * max(1.0, a)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 24), st.integers(2, 3), st.integers(0, 10**6))
def test_shift_and_conjugation_invariance(n, d, seed):
    rng = np.random.default_rng(seed)
    f = make_seq(rng, n)
    base = gowers_norm(f, d).value
    a = int(rng.integers(0, n))
    assert gowers_norm(f.shift(a), d).value == pytest.approx(base, abs=1e-10)
    assert gowers_norm(f.conj(), d).value == pytest.approx(base, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 24), st.integers(2, 3), st.integers(0, 10**6))
def test_homogeneity_and_triangle(n, d, seed):
    rng = np.random.default_rng(seed)
    f = make_seq(rng, n)
    g = make_seq(rng, n)
    c = complex(rng.standard_normal() + 1j * rng.standard_normal())
    nf = gowers_norm(f, d).value
    ng = gowers_norm(g, d).value
    scaled = gowers_norm(ZnSeq(c * f.values), d).value
    assert scaled == pytest.approx(abs(c) * nf, abs=1e-10 * max(1.0, abs(c)))
    total = gowers_norm(ZnSeq(f.values + g.values), d).value
    assert total <= nf + ng + 1e-9


def test_u2_bounded_by_u3(rng):
    for _ in range(40):
        f = make_seq(rng, int(rng.integers(2, 49)))
        assert gowers_norm(f, 2).value <= gowers_norm(f, 3).value + 1e-10


class TestGvnCheck:
    def test_base_case_equality_for_constant_phi(self, rng):
        n = 16
        theta = make_seq(rng, n)
        res = gvn_check(theta, [ZnSeq(np.full(n, 0.6 + 0j))], k=1)
        assert res.lhs == pytest.approx(res.rhs, abs=1e-12)
        assert res.holds

    def test_all_ones_saturates(self):
        n = 16
        ones = ZnSeq(np.ones(n))
        res = gvn_check(ones, [ones, ones, ones], k=3)
        assert res.lhs == pytest.approx(1.0, abs=1e-12)
        assert res.rhs == pytest.approx(1.0, abs=1e-12)

    def test_rejects_oversized_phi(self, rng):
        n = 16
        theta = make_seq(rng, n)
        big = ZnSeq(np.full(n, 2.0 + 0j))
        with pytest.raises(PreconditionError):
            gvn_check(theta, [theta, big], k=2)

    def test_rejects_modulus_mismatch(self, rng):
        with pytest.raises(PreconditionError):
            gvn_check(make_seq(rng, 8), [make_seq(rng, 9)], k=1)

    def test_random_instances_hold(self, rng):
        for i in range(150):
            n = int((31, 64, 127)[i % 3])
            k = 1 + i % 3
            theta = ZnSeq(unit_disc(rng, n))
            phis = [ZnSeq(2.0 * rng.random() * unit_disc(rng, n))]
            phis += [ZnSeq(unit_disc(rng, n)) for _ in range(k - 1)]
            res = gvn_check(theta, phis, k)
            assert res.holds, (i, res)
