import random
from fractions import Fraction

import pytest

from senlab.errors import DomainError, UsageError
from senlab.field import (FieldEmbedding, LocalFieldSpec, apply_substitution,
                          build_field, cyclotomic_field, eisenstein_field,
                          qp_field, residue, scalar_embedding, trace_to_Qp,
                          valuation)
from senlab.padic import PadicScalar

S = PadicScalar


@pytest.fixture(scope="module")
def K3():
    """Q_3(sqrt 3)."""
    return eisenstein_field(3, [-3, 0, 1], 30)


@pytest.fixture(scope="module")
def Z5():
    """Q_5(zeta_5)."""
    return cyclotomic_field(5, 1, 30)


class TestBuild:
    def test_trivial_field(self):
        K = qp_field(5, 20)
        assert K.f == 1 and K.e_ram == 1
        assert K.different_e == K.one()
        assert (K.pi - K.from_int(5)).is_zero()

    def test_ramified_quadratic(self, K3):
        assert K3.e_ram == 2 and K3.degree == 2
        assert (K3.pi * K3.pi - K3.from_int(3)).is_zero()
        e = K3.different_e
        assert (e - K3.from_int(2) * K3.pi).is_zero()
        assert e.valuation() == Fraction(1, 2)

    def test_degree_four_tower(self):
        L = build_field(LocalFieldSpec(3, [1, 0, 1], [[-3], [-6], [1]], 30))
        assert L.f == 2 and L.e_ram == 2 and L.degree == 4
        assert trace_to_Qp(L.one()) == S.from_int(4, 3, 30)

    def test_reducible_unramified_rejected(self):
        with pytest.raises(DomainError):
            build_field(LocalFieldSpec(3, [-1, 0, 1], [[-3], [1]], 30))

    def test_non_eisenstein_rejected(self):
        with pytest.raises(DomainError):
            build_field(LocalFieldSpec(3, [-1, 1], [[-9], [0], [1]], 30))
        with pytest.raises(DomainError):
            build_field(LocalFieldSpec(3, [-1, 1], [[-1], [0], [1]], 30))

    def test_non_monic_rejected(self):
        with pytest.raises(UsageError):
            build_field(LocalFieldSpec(3, [-1, 2], [[-3], [1]], 30))

    def test_different_two_routes_agree(self, K3, Z5):
        for K in (K3, Z5):
            assert (K.different_e - K.derivative_at_pi_horner()).is_zero()

    def test_different_valuation_tame_vs_wild(self, K3):
        # tame: equality with (e_ram - 1)/e_ram
        assert K3.different_e.valuation() == Fraction(1, 2)
        # wild: strictly larger
        W = cyclotomic_field(3, 2, 30)
        v = W.different_e.valuation()
        assert v == Fraction(3, 2) and v > Fraction(W.e_ram - 1, W.e_ram)


class TestArithmetic:
    def test_defining_relation(self, K3):
        prod = (K3.one() + K3.pi) * (K3.one() - K3.pi)
        assert (prod - K3.from_int(-2)).is_zero()

    def test_additive_inverse(self, K3):
        x = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(4, 3, 30)]])
        assert (x + (-x)).is_zero()

    def test_division_round_trip(self, K3):
        x = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(4, 3, 30)]])
        q = x / (K3.one() + K3.pi)
        assert (q * (K3.one() + K3.pi) - x).is_zero()
        assert (x.inverse() * x - K3.one()).is_zero()

    def test_valuation_examples(self, K3):
        assert K3.from_int(3).valuation() == 1
        assert K3.pi.valuation() == Fraction(1, 2)
        assert (K3.from_int(2) * K3.pi).valuation() == Fraction(1, 2)
        assert K3.pi.pi_valuation() == 1
        exact, v = valuation(K3.pi, normalize="pi")
        assert exact and v == 1

    def test_valuation_properties(self, K3):
        rng = random.Random(2)
        for _ in range(30):
            x = K3.from_grid([[S.from_int(rng.randrange(-80, 81), 3, 30),
                               S.from_int(rng.randrange(-80, 81), 3, 30)]])
            y = K3.from_grid([[S.from_int(rng.randrange(-80, 81), 3, 30),
                               S.from_int(rng.randrange(-80, 81), 3, 30)]])
            vx, vy = x.valuation(), y.valuation()
            if vx is None or vy is None:
                continue
            assert (x * y).valuation() == vx + vy
            vs = (x + y).valuation()
            if vx != vy:
                assert vs == min(vx, vy)
            else:
                assert vs is None or vs >= min(vx, vy)


class TestTraceResidue:
    def test_trace_of_one(self, K3, Z5):
        assert trace_to_Qp(K3.one()) == S.from_int(2, 3, 30)
        assert trace_to_Qp(Z5.one()) == S.from_int(4, 5, 30)

    def test_trace_of_uniformizers(self, K3, Z5):
        assert trace_to_Qp(K3.pi).is_zero()
        assert trace_to_Qp(Z5.pi) == S.from_int(-5, 5, 30)
        zeta = Z5.one() + Z5.pi
        assert trace_to_Qp(zeta) == S.from_int(-1, 5, 30)

    def test_trace_linearity(self, Z5):
        rng = random.Random(4)
        for _ in range(10):
            x = Z5.from_grid([[S.from_int(rng.randrange(-50, 50), 5, 30)
                               for _ in range(4)]])
            y = Z5.from_grid([[S.from_int(rng.randrange(-50, 50), 5, 30)
                               for _ in range(4)]])
            assert (trace_to_Qp(x + y) - trace_to_Qp(x) - trace_to_Qp(y)).is_zero()

    def test_residue_examples(self, K3):
        assert residue(K3.pi) == (0,)
        x = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(4, 3, 30)]])
        assert residue(K3.one() + K3.pi * x) == (1,)
        with pytest.raises(DomainError):
            residue(K3.pi.inverse())

    def test_residue_of_unramified_generator(self):
        L = build_field(LocalFieldSpec(3, [1, 0, 1], [[-3], [1]], 30))
        assert residue(L.y_gen()) == (0, 1)


class TestSubstitution:
    def test_identity_images(self, K3):
        x = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(4, 3, 30)]])
        assert (apply_substitution(x, K3.one(), K3.pi) - x).is_zero()

    def test_conjugation(self, K3):
        x = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(4, 3, 30)]])
        s = apply_substitution(x, K3.one(), -K3.pi)
        expected = K3.from_grid([[S.from_int(7, 3, 30), S.from_int(-4, 3, 30)]])
        assert (s - expected).is_zero()
        assert (apply_substitution(K3.from_int(3), K3.one(), -K3.pi)
                - K3.from_int(3)).is_zero()
        assert trace_to_Qp(s) == trace_to_Qp(x)

    def test_cyclotomic_automorphism(self, Z5):
        zeta = Z5.one() + Z5.pi
        img = zeta ** 2 - Z5.one()
        s = apply_substitution(zeta, Z5.one(), img)
        assert (s - zeta ** 2).is_zero()
        assert trace_to_Qp(s) == trace_to_Qp(zeta)

    def test_bad_image_rejected(self, K3):
        with pytest.raises(DomainError):
            apply_substitution(K3.pi, K3.one(), K3.one())

    def test_trace_transitivity_along_embedding(self, Z5):
        Q5 = qp_field(5, 30)
        emb = scalar_embedding(Q5, Z5)
        rng = random.Random(6)
        for _ in range(10):
            x = Q5.from_int(rng.randrange(-10 ** 5, 10 ** 5))
            lhs = trace_to_Qp(emb(x))
            rhs = trace_to_Qp(x) * S.from_int(Z5.degree, 5, 30)
            assert (lhs - rhs).is_zero()

    def test_embedding_rejects_wrong_relations(self, K3, Z5):
        with pytest.raises(UsageError):
            FieldEmbedding(K3, Z5, Z5.one(), Z5.pi)  # different primes
        Q3 = qp_field(3, 30)
        with pytest.raises(DomainError):
            FieldEmbedding(Q3, K3, K3.one(), K3.pi)  # pi does not map to 3
