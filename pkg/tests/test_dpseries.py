import random

import pytest

from senlab.dpseries import (DPSeries, coaction, dp_compose, dp_mul,
                             gsharp_transport, log_t, sen_theta, solve_theta,
                             theta_matrix)
from senlab.errors import ConvergenceError, UsageError
from senlab.field import eisenstein_field, qp_field
from senlab.padic import PadicScalar, padic_log

S = PadicScalar
N = 12


@pytest.fixture(scope="module")
def K():
    return eisenstein_field(3, [-3, 0, 1], 40)


def random_series(K, rng, trunc=N, span=40):
    coeffs = [K.from_grid([[S.from_int(rng.randrange(-span, span), 3, 40),
                            S.from_int(rng.randrange(-span, span), 3, 40)]])
              for _ in range(trunc + 1)]
    return DPSeries(K, coeffs)


class TestMultiplication:
    def test_a_squared(self, K):
        a = DPSeries.from_ints(K, [0, 1], N)
        sq = dp_mul(a, a)
        assert (sq.coeffs[2] - K.from_int(2)).is_zero()
        assert sq.coeffs[1].is_zero() and sq.coeffs[0].is_zero()

    def test_unit(self, K):
        a = DPSeries.from_ints(K, [0, 1], N)
        assert dp_mul(a, DPSeries.one(K, N)).eq_to_precision(a)

    def test_one_plus_ea_squared(self, K):
        e = K.different_e
        t = DPSeries(K, [K.one(), e] + [K.zero()] * (N - 1))
        t2 = dp_mul(t, t)
        assert (t2.coeffs[0] - K.one()).is_zero()
        assert (t2.coeffs[1] - e * 2).is_zero()
        assert (t2.coeffs[2] - e * e * 2).is_zero()

    def test_mismatched_e_rejected(self, K):
        f = DPSeries.one(K, N)
        g = DPSeries.one(K, N, e=K.one())
        with pytest.raises(UsageError):
            dp_mul(f, g)


class TestTheta:
    def test_constants_in_kernel(self, K):
        assert sen_theta(DPSeries.one(K, N)).eq_to_precision(DPSeries.zero(K, N))

    def test_theta_of_a(self, K):
        out = sen_theta(DPSeries.from_ints(K, [0, 1], N))
        assert (out.coeffs[0] - K.one()).is_zero()
        assert (out.coeffs[1] - K.different_e).is_zero()
        assert out.coeffs[2].is_zero()

    def test_t_is_eigenvector(self, K):
        e = K.different_e
        t = DPSeries(K, [K.one(), e] + [K.zero()] * (N - 1))
        out = sen_theta(t)
        for n in range(out.valid_to + 1):
            assert (out.coeffs[n] - e * t.coeffs[n]).is_zero()

    def test_top_degree_is_flagged_incomplete(self, K):
        f = DPSeries.one(K, N)
        assert sen_theta(f).valid_to == N - 1

    def test_leibniz(self, K):
        rng = random.Random(1)
        for _ in range(5):
            f = random_series(K, rng)
            g = random_series(K, rng)
            lhs = sen_theta(dp_mul(f, g))
            r1 = dp_mul(sen_theta(f), g)
            r2 = dp_mul(f, sen_theta(g))
            for n in range(N):
                assert (lhs.coeffs[n] - r1.coeffs[n] - r2.coeffs[n]).is_zero()


class TestSolveTheta:
    def test_zero(self, K):
        assert solve_theta(DPSeries.zero(K, N)).eq_to_precision(DPSeries.zero(K, N))

    def test_closed_form_for_one(self, K):
        sol = solve_theta(DPSeries.one(K, N))
        cur = K.one()
        for n in range(1, N + 1):
            assert (sol.coeffs[n] - cur).is_zero()
            cur = cur * (-K.different_e) * n
        assert sol.eq_to_precision(log_t(K, N))

    def test_preimage_of_t(self, K):
        e = K.different_e
        g = DPSeries(K, [K.one(), e] + [K.zero()] * (N - 1))
        sol = solve_theta(g)
        a = DPSeries.from_ints(K, [0, 1], N)
        for n in range(1, N + 1):
            assert (sol.coeffs[n] - a.coeffs[n]).is_zero()

    def test_round_trip(self, K):
        rng = random.Random(0)
        for _ in range(5):
            g = random_series(K, rng)
            assert sen_theta(solve_theta(g)).eq_to_precision(g, through=N - 1)

    def test_integrality_preserved(self, K):
        rng = random.Random(9)
        for _ in range(10):
            g = random_series(K, rng)
            assert g.is_integral()
            assert solve_theta(g).is_integral()

    def test_kernel_is_constants(self, K):
        # theta f = 0 through N-1 forces c_1..c_N to vanish
        from senlab import linalg
        mat = theta_matrix(K, N)
        kernel = linalg.kernel_basis(mat, K.one(), K.zero())
        assert len(kernel) == 1
        vec = kernel[0]
        assert not vec[0].is_zero()
        assert all(x.is_zero() for x in vec[1:])


class TestCoaction:
    def test_identity_at_zero(self, K):
        f = random_series(K, random.Random(3))
        assert coaction(f, K.zero()).eq_to_precision(f)

    def test_scales_t(self, K):
        e = K.different_e
        t = DPSeries(K, [K.one(), e] + [K.zero()] * (N - 1))
        b = K.from_int(3)
        ct = coaction(t, b)
        scale = K.one() + e * b
        for n in range(N + 1):
            assert (ct.coeffs[n] - scale * t.coeffs[n]).is_zero()

    def test_group_action(self, K):
        rng = random.Random(7)
        e = K.different_e
        for _ in range(3):
            f = random_series(K, rng)
            b1 = K.from_int(3 * rng.randrange(1, 30))
            b2 = K.pi * K.from_int(3 * rng.randrange(1, 30))
            lhs = coaction(coaction(f, b1), b2)
            rhs = coaction(f, b1 + b2 + e * b1 * b2)
            assert lhs.eq_to_precision(rhs)

    def test_commutes_with_multiplication(self, K):
        # factors of degree <= N/2, so the product fits the truncation
        rng = random.Random(8)
        b = K.from_int(3)
        f = DPSeries(K, list(random_series(K, rng).coeffs[:N // 2])
                     + [K.zero()] * (N - N // 2 + 1))
        g = DPSeries(K, list(random_series(K, rng).coeffs[:N // 2])
                     + [K.zero()] * (N - N // 2 + 1))
        lhs = coaction(dp_mul(f, g), b)
        rhs = dp_mul(coaction(f, b), coaction(g, b))
        assert lhs.eq_to_precision(rhs)

    def test_monitor_rejects_unit_b_on_flat_series(self, K):
        f = DPSeries.from_ints(K, [1] * (N + 1), N)
        with pytest.raises(ConvergenceError):
            coaction(f, K.one())

    def test_log_shift_with_unit_e(self):
        # over Q_3 (e = 1): coaction(log_t, b) - log_t = log(1 + b)
        Q = qp_field(3, 40)
        lt = log_t(Q, 60)
        b = Q.from_int(3)
        shifted = coaction(lt, b)
        const = padic_log(S.from_int(4, 3, 40))
        d0 = shifted.coeffs[0] - Q.from_scalar(const)
        assert d0.is_zero() and d0.val_bound() >= 38
        for n in range(1, 13):
            d = shifted.coeffs[n] - lt.coeffs[n]
            assert d.is_zero() and d.val_bound() >= 38

    def test_log_shift_with_scalar_e_three(self):
        # e = 3 over Q_3: e * (coaction(log_t, b) - log_t) = log(1 + e b)
        Q = qp_field(3, 40)
        e = Q.from_int(3)
        lt = log_t(Q, 60, e=e)
        b = Q.from_int(3)
        shifted = coaction(lt, b)
        const = padic_log(S.from_int(10, 3, 40))
        d0 = shifted.coeffs[0] * e - Q.from_scalar(const)
        assert d0.is_zero() and d0.val_bound() >= 36


class TestGsharp:
    def test_to_gsharp_coefficients(self, K):
        fa = DPSeries.from_ints(K, [0, 1], N)
        tg = gsharp_transport(fa, "to_gsharp")
        cur = K.one()
        for n in range(1, N + 1):
            assert (tg.coeffs[n] - cur).is_zero()
            cur = cur * (-K.different_e) * n

    def test_from_gsharp_coefficients(self, K):
        fa = DPSeries.from_ints(K, [0, 1], N)
        fg = gsharp_transport(fa, "from_gsharp")
        cur = K.one()
        for n in range(1, N + 1):
            assert (fg.coeffs[n] - cur).is_zero()
            cur = cur * K.different_e

    def test_round_trip(self, K):
        rng = random.Random(12)
        f = random_series(K, rng)
        rt = gsharp_transport(gsharp_transport(f, "to_gsharp"), "from_gsharp")
        assert rt.eq_to_precision(f)
        rt = gsharp_transport(gsharp_transport(f, "from_gsharp"), "to_gsharp")
        assert rt.eq_to_precision(f)

    def test_bad_direction(self, K):
        with pytest.raises(UsageError):
            gsharp_transport(DPSeries.one(K, N), "sideways")

    def test_compose_requires_zero_constant_term(self, K):
        with pytest.raises(UsageError):
            dp_compose(DPSeries.one(K, N), DPSeries.one(K, N))
