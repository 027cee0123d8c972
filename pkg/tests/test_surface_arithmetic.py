import random
from fractions import Fraction

import pytest

from resloc.errors import ValidationError
from resloc.surface_arithmetic import (
    SplittingData,
    SurfaceTopology,
    arithmetic_genus,
    euler_char_L,
    hodge_index_max_square,
    purity_chi_bound,
    reduced_virtual_dim,
    splitting_lower_bound,
)


class TestGenus:
    def test_plane_cubic(self):
        assert arithmetic_genus(9, 9) == 1

    def test_line(self):
        assert arithmetic_genus(1, 3) == 0

    def test_exceptional_curve(self):
        assert arithmetic_genus(-1, 1) == 0

    def test_parity_violation(self):
        with pytest.raises(ValidationError):
            arithmetic_genus(2, 1)


class TestTopology:
    def test_chi_O_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            SurfaceTopology(beta_sq=0, beta_c1=0, c1_sq=9, c2=3, h01=1, h02=0)

    def test_not_divisible_by_12(self):
        with pytest.raises(ValidationError):
            SurfaceTopology(beta_sq=0, beta_c1=0, c1_sq=9, c2=4)

    def test_odd_beta_pairing_rejected(self):
        with pytest.raises(ValidationError):
            SurfaceTopology(beta_sq=1, beta_c1=2, c1_sq=9, c2=3)

    def test_k3(self):
        t = SurfaceTopology(beta_sq=2, beta_c1=0, c1_sq=0, c2=24, h01=0, h02=1)
        assert t.chi_O == 2
        assert euler_char_L(t) == 3
        assert reduced_virtual_dim(t, 0) == 2


class TestEulerAndDimension:
    def test_p2_degree_one(self):
        t = SurfaceTopology(beta_sq=1, beta_c1=3, c1_sq=9, c2=3)
        assert euler_char_L(t) == 3
        assert reduced_virtual_dim(t, 0) == 2

    def test_p2_degree_three(self):
        t = SurfaceTopology(beta_sq=9, beta_c1=9, c1_sq=9, c2=3)
        assert euler_char_L(t) == 10
        assert reduced_virtual_dim(t, 0) == 9

    def test_identities_on_random_inputs(self):
        rng = random.Random(42)
        checked = 0
        while checked < 100:
            h01 = rng.randrange(0, 3)
            h02 = rng.randrange(0, 3)
            chi_O = 1 - h01 + h02
            c1_sq = rng.randrange(-30, 31)
            c2 = 12 * chi_O - c1_sq
            beta_c1 = rng.randrange(-10, 11)
            beta_sq = rng.randrange(-10, 11) * 2 + beta_c1 % 2
            t = SurfaceTopology(beta_sq, beta_c1, c1_sq, c2, h01, h02)
            assert euler_char_L(t) - t.chi_O == (beta_sq + beta_c1) // 2
            h = arithmetic_genus(beta_sq, beta_c1)
            assert 2 * h - 2 == beta_sq - beta_c1
            assert reduced_virtual_dim(t, 0) == h - 1 + beta_c1 + h02
            checked += 1

    def test_p2_virtual_dim_is_chi_minus_one(self):
        for d in (1, 2, 3, 4):
            t = SurfaceTopology(beta_sq=d * d, beta_c1=3 * d, c1_sq=9, c2=3)
            assert reduced_virtual_dim(t, 0) == euler_char_L(t) - 1


class TestPurityBound:
    def test_examples(self):
        assert purity_chi_bound(1, 2, 2)
        assert not purity_chi_bound(1, 2, 3)
        assert purity_chi_bound(0, 0, 1)


class TestSplittingBound:
    def test_even_split(self):
        data = SplittingData(beta_sq=10, pairings=(5, 5))
        assert splitting_lower_bound(10, data) == 5

    def test_single_part(self):
        data = SplittingData(beta_sq=10, pairings=(10,))
        assert splitting_lower_bound(10, data) == 0

    def test_uneven(self):
        data = SplittingData(beta_sq=10, pairings=(3, 7))
        assert splitting_lower_bound(10, data) == 3

    def test_half_integer(self):
        data = SplittingData(beta_sq=8, pairings=(3, 5))
        assert splitting_lower_bound(8, data) == Fraction(3, 1)
        data = SplittingData(beta_sq=4, pairings=(1, 3))
        assert splitting_lower_bound(4, data) == Fraction(1, 1)
        data = SplittingData(beta_sq=6, pairings=(1, 2, 3))
        assert splitting_lower_bound(6, data) == Fraction(1 + 2 + 3, 2)

    def test_inconsistent_total_rejected(self):
        with pytest.raises(ValidationError):
            SplittingData(beta_sq=10, pairings=(3, 3))

    def test_negative_pairing_rejected(self):
        with pytest.raises(ValidationError):
            SplittingData(beta_sq=2, pairings=(-1, 3))

    def test_mismatched_beta_sq(self):
        data = SplittingData(beta_sq=10, pairings=(5, 5))
        with pytest.raises(ValidationError):
            splitting_lower_bound(12, data)

    def test_subdividing_never_decreases(self):
        rng = random.Random(3)
        for _ in range(50):
            beta_sq = rng.randrange(4, 40) * 2
            a = rng.randrange(1, beta_sq - 1)
            coarse = SplittingData(beta_sq=beta_sq, pairings=(a, beta_sq - a))
            b = rng.randrange(1, beta_sq - a)
            fine = SplittingData(beta_sq=beta_sq, pairings=(a, b, beta_sq - a - b))
            assert splitting_lower_bound(beta_sq, fine) >= splitting_lower_bound(
                beta_sq, coarse
            )


class TestHodgeIndex:
    def test_examples(self):
        assert hodge_index_max_square(9, 3) == 1
        assert hodge_index_max_square(2, 0) == 0
        with pytest.raises(ValidationError):
            hodge_index_max_square(0, 1)

    def test_fractional(self):
        assert hodge_index_max_square(8, 3) == Fraction(9, 8)
