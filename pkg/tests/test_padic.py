import random
from fractions import Fraction

import pytest

from senlab.errors import DomainError, PrecisionError, UsageError
from senlab.padic import (PadicPoly, PadicScalar, newton_polygon, padic_exp,
                          padic_log, scalar_arith)

S = PadicScalar


class TestScalarArith:
    def test_add_carries(self):
        z = S.from_int(2, 5, 10) + S.from_int(3, 5, 10)
        assert z.val == 1 and z.unit == 1 and z.prec == 10

    def test_mul_absorbing_zero_shifts_precision(self):
        x = S.from_int(25, 5, 10)
        z = x * S.zero(5, 7)
        assert z.is_zero() and z.prec == 9

    def test_geometric_inverse(self):
        p, n = 5, 8
        q = S.from_int(1, p, n) / S.from_int(1 - p, p, n)
        assert q.lift() == sum(p ** k for k in range(n)) % p ** n
        assert (S.from_int(1 - p, p, n) * q - S.one(p, n)).is_zero()

    def test_dispatch(self):
        x, y = S.from_int(7, 3, 12), S.from_int(5, 3, 12)
        assert scalar_arith(x, y, "add") == S.from_int(12, 3, 12)
        assert scalar_arith(x, y, "sub") == S.from_int(2, 3, 12)
        assert scalar_arith(x, y, "mul") == S.from_int(35, 3, 12)
        assert (scalar_arith(x, y, "div") * y - x).is_zero()
        with pytest.raises(UsageError):
            scalar_arith(x, y, "pow")

    def test_mixed_primes_rejected(self):
        with pytest.raises(UsageError):
            S.from_int(1, 3, 10) + S.from_int(1, 5, 10)

    def test_division_by_zero_to_precision(self):
        with pytest.raises(PrecisionError):
            S.from_int(1, 3, 10) / S.zero(3, 10)

    def test_precision_propagation_rules(self):
        x = S.from_int(9, 3, 20)      # v=2
        y = S.from_int(3, 3, 12)      # v=1
        assert (x + y).prec == 12
        assert (x - y).prec == 12
        assert (x * y).prec == min(20 + 1, 12 + 2)
        assert (x / y).prec == min(20 - 1, 12 + 2 - 2)

    def test_negative_valuations(self):
        a = S.from_fraction(Fraction(1, 5), 5, 10)
        b = S.from_fraction(Fraction(2, 25), 5, 10)
        c = a + b
        assert c.val == -2
        assert (c - S.from_fraction(Fraction(7, 25), 5, 10)).is_zero()

    def test_precision_soundness_against_exact_rationals(self):
        # exact arithmetic on rationals, then reduction, matches scalar ops
        rng = random.Random(11)
        p, prec = 7, 18
        for _ in range(100):
            r = Fraction(rng.randrange(-500, 500), rng.choice([1, 2, 3, 5, 6]))
            s = Fraction(rng.randrange(-500, 500), rng.choice([1, 2, 3, 5, 6]))
            xr, xs = S.from_fraction(r, p, prec), S.from_fraction(s, p, prec)
            assert (xr + xs - S.from_fraction(r + s, p, prec)).is_zero()
            assert (xr * xs - S.from_fraction(r * s, p, prec)).is_zero()
            if s != 0 and (s.numerator % p):
                assert (xr / xs - S.from_fraction(r / s, p, prec)).is_zero()


class TestExpLog:
    def test_exp_zero(self):
        assert (padic_exp(S.zero(5, 12)) - S.one(5, 12)).is_zero()

    def test_round_trip(self):
        x = S.from_int(5, 5, 12)
        assert (padic_log(padic_exp(x)) - x).is_zero()
        y = S.from_int(9, 3, 16)
        assert (padic_exp(padic_log(S.one(3, 16) + y)) - (S.one(3, 16) + y)).is_zero()

    def test_exp_domain_error_names_radius(self):
        with pytest.raises(DomainError, match="alpha"):
            padic_exp(S.from_int(2, 2, 12))
        with pytest.raises(DomainError):
            padic_exp(S.from_int(2, 3, 12))
        # v = 2 is fine for p = 2
        padic_exp(S.from_int(4, 2, 12))

    def test_log_identity_values(self):
        assert padic_log(S.one(5, 10)).is_zero()
        l1 = padic_log(S.from_int(6, 5, 10))
        l2 = padic_log(S.from_int(36, 5, 10))
        assert (l2 - (l1 + l1)).is_zero()

    def test_log_leading_term_valuation(self):
        assert padic_log(S.from_int(4, 3, 10)).val == 1

    def test_log_domain_error(self):
        with pytest.raises(DomainError):
            padic_log(S.from_int(2, 5, 10))


class TestNewtonPolygon:
    def test_eisenstein(self):
        np1 = newton_polygon(PadicPoly.from_ints([-5, 0, 1], 5, 20))
        assert np1.slope_multiset() == [Fraction(1, 2), Fraction(1, 2)]

    def test_split_roots(self):
        np2 = newton_polygon(PadicPoly.from_ints([5, -6, 1], 5, 20))
        assert np2.slope_multiset() == [Fraction(0), Fraction(1)]

    def test_three_point_hull(self):
        np3 = newton_polygon(PadicPoly.from_ints([125, 5, 0, 1], 5, 20))
        assert list(np3.vertices) == [(0, Fraction(3)), (1, Fraction(1)),
                                      (3, Fraction(0))]
        assert np3.slope_multiset() == [Fraction(1, 2), Fraction(1, 2), Fraction(2)]

    def test_product_is_union_of_slopes(self):
        rng = random.Random(5)
        for _ in range(10):
            f = PadicPoly.from_ints([rng.randrange(1, 40), rng.randrange(-40, 40), 1], 3, 25)
            g = PadicPoly.from_ints([rng.randrange(1, 40), rng.randrange(-40, 40), 1], 3, 25)
            sf = newton_polygon(f).slope_multiset()
            sg = newton_polygon(g).slope_multiset()
            assert newton_polygon(f * g).slope_multiset() == sorted(sf + sg)

    def test_unit_substitution_keeps_slopes(self):
        f = PadicPoly.from_ints([125, 5, 0, 1], 5, 20)
        u = S.from_int(2, 5, 20)
        coeffs = [c * u ** i for i, c in enumerate(f.coeffs)]
        coeffs = [c / u ** f.degree for c in coeffs]
        g = PadicPoly(coeffs)
        assert newton_polygon(g).slope_multiset() == newton_polygon(f).slope_multiset()

    def test_root_rescaling_shifts_slopes(self):
        f = PadicPoly.from_ints([125, 5, 0, 1], 5, 30)
        g = f.scaled_roots(2)
        shifted = [s + 2 for s in newton_polygon(f).slope_multiset()]
        assert newton_polygon(g).slope_multiset() == shifted

    def test_hull_relevant_unknown_raises(self):
        # T^2 + cT + p^2 with c unknown below the hull height at index 1
        coeffs = [S.from_int(25, 5, 20), S.zero(5, 0), S.one(5, 20)]
        with pytest.raises(PrecisionError):
            newton_polygon(PadicPoly(coeffs, monic=True))

    def test_unknown_on_or_above_hull_is_fine(self):
        coeffs = [S.from_int(25, 5, 20), S.zero(5, 20), S.one(5, 20)]
        np1 = newton_polygon(PadicPoly(coeffs, monic=True))
        assert np1.slope_multiset() == [Fraction(1), Fraction(1)]

    def test_nonmonic_normalization(self):
        f = PadicPoly([S.from_int(10, 5, 20), S.from_int(2, 5, 20)])
        assert newton_polygon(f).slope_multiset() == [Fraction(1)]
        bad = PadicPoly([S.one(5, 20), S.zero(5, 20)])
        with pytest.raises(PrecisionError):
            newton_polygon(bad)

    def test_all_low_coefficients_unknown(self):
        # char-poly-of-a-nilpotent shape: only the leading point is exact
        coeffs = [S.zero(5, 20), S.zero(5, 20), S.one(5, 20)]
        poly = newton_polygon(PadicPoly(coeffs, monic=True), allow_bounds=True)
        assert poly.total_multiplicity() == 2
        assert poly.all_slopes_positive()
        with pytest.raises(PrecisionError):
            newton_polygon(PadicPoly(coeffs, monic=True))
