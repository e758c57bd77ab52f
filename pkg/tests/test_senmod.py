import random
from fractions import Fraction

import pytest

from senlab import linalg
from senlab.dpseries import DPSeries, coaction
from senlab.errors import DomainError, UsageError
from senlab.field import eisenstein_field, qp_field
from senlab.padic import PadicScalar
from senlab.senmod import (SenModule, bk_twist, char_poly,
                           char_poly_of_twist_via_resultant, cohomology, dual,
                           fermat_identity_gap, ht_weights, nearly_ht_test,
                           operator_series, operator_series_apply,
                           regular_representation, semilinear_descent_matrix,
                           tensor, trivial_module)

S = PadicScalar


@pytest.fixture(scope="module")
def K():
    return eisenstein_field(3, [-3, 0, 1], 50)


@pytest.fixture(scope="module")
def Q5():
    return qp_field(5, 40)


def random_module(K, rng, dmax=4, span=9):
    d = rng.randrange(1, dmax + 1)
    return SenModule.from_int_matrix(
        K, [[rng.randrange(-span, span + 1) for _ in range(d)] for _ in range(d)])


def random_nearly_ht(K, rng, dmax=4):
    d = rng.randrange(1, dmax + 1)
    e = K.different_e
    theta = [[e * rng.randrange(-3, 4) if i == j else K.zero()
              for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            theta[i][j] = theta[i][j] + K.from_int(3 * rng.randrange(-15, 16))
    return SenModule(K, theta)


class TestCharPoly:
    def test_zero_matrix(self, K):
        cp = char_poly(SenModule.from_int_matrix(K, [[0, 0], [0, 0]]))
        assert cp[0].is_zero() and cp[1].is_zero()
        assert (cp[2] - K.one()).is_zero()

    def test_nilpotent(self, K):
        cp = char_poly(SenModule.from_int_matrix(K, [[0, -1], [0, 0]]))
        assert cp[0].is_zero() and cp[1].is_zero()

    def test_diagonal(self, K):
        e = K.different_e
        cp = char_poly(SenModule.diagonal_weights(K, [1, 2]))
        assert (cp[1] + e * 3).is_zero()
        assert (cp[0] - e * e * 2).is_zero()

    def test_cayley_hamilton(self, K):
        rng = random.Random(21)
        for _ in range(5):
            M = random_module(K, rng)
            cp = char_poly(M)
            acc = [[K.zero()] * M.dim for _ in range(M.dim)]
            power = linalg.identity(M.dim, K.one(), K.zero())
            for c in cp:
                acc = linalg.mat_add(acc, linalg.mat_scale(power, c))
                power = linalg.mat_mul(power, M.matrix(), K.zero())
            assert all(x.is_zero() for row in acc for x in row)


class TestClassifier:
    def test_integer_weights_pass(self, K):
        assert nearly_ht_test(SenModule.diagonal_weights(K, [0, 1, -3])).verdict

    def test_identity_over_ramified_fails(self, K):
        r = nearly_ht_test(SenModule.from_int_matrix(K, [[1, 0], [0, 1]]))
        assert not r.verdict and Fraction(0) in r.offending

    def test_negative_valuation_fails(self, Q5):
        half = Q5.from_scalar(S.from_fraction(Fraction(1, 5), 5, 40))
        r = nearly_ht_test(SenModule(Q5, [[half, Q5.zero()], [Q5.zero(), half]]))
        assert not r.verdict and min(r.offending) < 0

    def test_nilpotent_passes(self, K):
        assert nearly_ht_test(SenModule.from_int_matrix(K, [[0, -1], [0, 0]])).verdict

    def test_conjugation_invariance(self, K):
        rng = random.Random(22)
        for _ in range(5):
            M = random_module(K, rng, dmax=3)
            d = M.dim
            lower = [[K.from_int(rng.randrange(-9, 10)) if i > j
                      else (K.one() if i == j else K.zero())
                      for j in range(d)] for i in range(d)]
            upper = [[K.from_int(rng.randrange(-9, 10)) if i < j
                      else (K.one() if i == j else K.zero())
                      for j in range(d)] for i in range(d)]
            P = linalg.mat_mul(lower, upper, K.zero())
            Pinv = linalg.invert(P, K.one(), K.zero())
            conj = linalg.mat_mul(P, linalg.mat_mul(M.matrix(), Pinv, K.zero()),
                                  K.zero())
            assert nearly_ht_test(SenModule(K, conj)).verdict == \
                nearly_ht_test(M).verdict

    def test_twist_invariance(self, K):
        rng = random.Random(23)
        for _ in range(5):
            M = random_module(K, rng, dmax=3)
            base = nearly_ht_test(M).verdict
            for n in (-2, 1, 5):
                assert nearly_ht_test(bk_twist(M, n)).verdict == base

    def test_resultant_oracle(self, K):
        rng = random.Random(24)
        for _ in range(8):
            M = random_module(K, rng)
            direct = nearly_ht_test(M).char_q
            oracle = char_poly_of_twist_via_resultant(M)
            assert all((a - b).is_zero() for a, b in zip(direct, oracle))

    def test_fermat_gap(self, K, Q5):
        for field in (K, Q5):
            for gap in fermat_identity_gap(field):
                assert gap.is_zero() or gap.val_bound() > 0


class TestWeights:
    def test_diagonal(self, K):
        M = SenModule.diagonal_weights(K, [2, 2, 5])
        assert ht_weights(M, (0, 6)) == [(2, 2), (5, 1)]

    def test_nilpotent_generalized_weight(self, K):
        M = SenModule.from_int_matrix(K, [[0, -1], [0, 0]])
        assert ht_weights(M, (-1, 1)) == [(0, 2)]

    def test_near_but_not_equal_is_not_detected(self, Q5):
        h = Q5.from_scalar(S.from_fraction(Fraction(1, 2), 5, 40))
        M = SenModule(Q5, [[h * Q5.different_e]])
        assert ht_weights(M, (0, 5)) == []

    def test_empty_range(self, K):
        M = SenModule.diagonal_weights(K, [0])
        with pytest.raises(UsageError):
            ht_weights(M, (3, 1))

    def test_requires_nearly_ht(self, K):
        M = SenModule.from_int_matrix(K, [[1]])
        with pytest.raises(DomainError):
            ht_weights(M, (0, 1))

    def test_default_range_covers_small_weights(self, K):
        M = SenModule.diagonal_weights(K, [1, -2])
        assert ht_weights(M) == [(-2, 1), (1, 1)]


class TestCohomology:
    def test_zero_map(self, K):
        c = cohomology(SenModule.from_int_matrix(K, [[0, 0], [0, 0]]))
        assert (c.h0_dim, c.h1_dim) == (2, 2)

    def test_nilpotent(self, K):
        c = cohomology(SenModule.from_int_matrix(K, [[0, -1], [0, 0]]))
        assert (c.h0_dim, c.h1_dim) == (1, 1)
        assert not c.h0_basis[0][0].is_zero() and c.h0_basis[0][1].is_zero()

    def test_invertible(self, K):
        c = cohomology(SenModule.diagonal_weights(K, [1, 2]))
        assert (c.h0_dim, c.h1_dim) == (0, 0)

    def test_h0_equals_h1(self, K, Q5):
        rng = random.Random(25)
        for trial in range(20):
            M = random_module(K if trial % 2 else Q5, rng, dmax=5)
            c = cohomology(M)
            assert c.h0_dim == c.h1_dim

    def test_endomorphisms_contain_identity(self, K):
        M = SenModule.diagonal_weights(K, [0, 1, 3])
        end = tensor(M, dual(M))
        assert cohomology(end).h0_dim >= 1


class TestTensorOps:
    def test_twist_of_trivial(self, K):
        t = bk_twist(trivial_module(K), 4)
        assert (t.theta[0][0] - K.different_e * 4).is_zero()

    def test_twist_additivity(self, K):
        one = trivial_module(K)
        t = tensor(bk_twist(one, 2), bk_twist(one, 3))
        assert (t.theta[0][0] - K.different_e * 5).is_zero()

    def test_dual_negates(self, K):
        t = dual(bk_twist(trivial_module(K), 2))
        assert (t.theta[0][0] + K.different_e * 2).is_zero()

    def test_mixed_fields_rejected(self, K, Q5):
        with pytest.raises(UsageError):
            tensor(trivial_module(K), trivial_module(Q5))


class TestOperatorSeries:
    def test_identity_at_zero(self, K):
        s = operator_series(bk_twist(trivial_module(K), 1), K.zero())
        assert (s[0][0] - K.one()).is_zero()

    def test_rank_one_binomials(self, K):
        e = K.different_e
        b = K.from_int(3)
        for n in (0, 1, 3):
            s = operator_series(bk_twist(trivial_module(K), n), b)
            assert (s[0][0] - (K.one() + e * b) ** n).is_zero()
        s = operator_series(bk_twist(trivial_module(K), -1), b)
        d = s[0][0] - (K.one() + e * b).inverse()
        assert d.is_zero() and d.val_bound() >= 40

    def test_group_law(self, K):
        rng = random.Random(26)
        e = K.different_e
        M = random_nearly_ht(K, rng)
        b1 = K.from_int(3 * rng.randrange(1, 20))
        b2 = K.pi * K.from_int(3 * rng.randrange(1, 20))
        s1 = operator_series(M, b1)
        s2 = operator_series(M, b2, check=False)
        s3 = operator_series(M, b1 + b2 + e * b1 * b2, check=False)
        prod = linalg.mat_mul(s1, s2, K.zero())
        for i in range(M.dim):
            for j in range(M.dim):
                d = prod[i][j] - s3[i][j]
                assert d.is_zero() and d.val_bound() >= 44

    def test_requires_nearly_ht(self, K):
        M = SenModule.from_int_matrix(K, [[1]])
        with pytest.raises(DomainError):
            operator_series(M, K.from_int(3))

    def test_matches_coaction_on_regular_representation(self, K):
        n_trunc = 8
        reg = regular_representation(K, n_trunc)
        rng = random.Random(27)
        f = DPSeries(K, [K.from_int(rng.randrange(-9, 9))
                         for _ in range(n_trunc + 1)])
        b = K.from_int(3)
        via_series = operator_series_apply(reg, b, list(f.coeffs), check=False)
        via_sub = coaction(f, b)
        for n in range(n_trunc + 1):
            d = via_series[n] - via_sub.coeffs[n]
            assert d.is_zero() and d.val_bound() >= 44


class TestDescent:
    def test_identity_character(self, K):
        D = semilinear_descent_matrix(bk_twist(trivial_module(K), 1),
                                      S.one(3, 50))
        assert (D[0][0] - K.one()).is_zero()

    def test_rank_one_power(self, K):
        chi = S.from_int(4, 3, 50)
        D = semilinear_descent_matrix(bk_twist(trivial_module(K), 2), chi)
        assert (D[0][0] - K.from_scalar(chi) ** 2).is_zero()

    def test_multiplicative_on_scalar_values(self, K):
        M = SenModule.diagonal_weights(K, [1, -2])
        c1, c2 = S.from_int(4, 3, 50), S.from_int(10, 3, 50)
        D1 = semilinear_descent_matrix(M, c1)
        D2 = semilinear_descent_matrix(M, c2, check=False)
        D12 = semilinear_descent_matrix(M, c1 * c2, check=False)
        prod = linalg.mat_mul(D1, D2, K.zero())
        for i in range(2):
            for j in range(2):
                assert (prod[i][j] - D12[i][j]).is_zero()

    def test_ball_precondition(self, K):
        with pytest.raises(DomainError, match="alpha"):
            semilinear_descent_matrix(trivial_module(K), S.from_int(2, 3, 50))

    def test_wrong_prime_rejected(self, K):
        with pytest.raises(UsageError):
            semilinear_descent_matrix(trivial_module(K), S.from_int(6, 5, 50))
