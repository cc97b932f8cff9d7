import itertools
from fractions import Fraction as F

import pytest

from cube_interact import discrete as dc
from cube_interact import oracles
from cube_interact.model import MultilinearPoly, SetFunction


def majority3():
    return SetFunction.from_callable(3, lambda S: 1 if bin(S).count("1") >= 2 else 0)


def additive(n):
    return SetFunction.from_callable(n, lambda S: bin(S).count("1"))


def brute_derivative_average(v, S):
    # independent of the library: explicit finite differences over all vertices
    n = v.n
    idx = [i for i in range(n) if S >> i & 1]
    total = F(0)
    for x in range(1 << n):
        d = F(0)
        for bits in itertools.product((0, 1), repeat=len(idx)):
            y = x & ~S
            for i, b in zip(idx, bits):
                y |= b << i
            d += (-1) ** (len(idx) - sum(bits)) * v[y]
        total += d
    return total / (1 << n)


class TestMobius:
    def test_additive(self):
        a = dc.mobius(additive(2))
        assert (a[0b01], a[0b10], a[0b11]) == (1, 1, 0)

    def test_unanimity(self):
        v = SetFunction.from_callable(2, lambda S: 1 if S == 0b11 else 0)
        assert dc.mobius(v).values == (0, 0, 0, 1)

    def test_constant(self):
        a = dc.mobius(SetFunction.from_callable(3, lambda S: F(5, 2)))
        assert a[0] == F(5, 2) and all(a[S] == 0 for S in range(1, 8))

    def test_zeta_direct_sum(self):
        v = dc.zeta(SetFunction.from_dict(1, {0: 1, 1: -1}))
        assert v.values == (1, 0)

    def test_majority(self):
        a = dc.mobius(majority3())
        assert [a[S] for S in (3, 5, 6, 7)] == [1, 1, 1, -2]
        assert all(a[S] == 0 for S in (0, 1, 2, 4))


class TestBanzhaf:
    def test_majority(self):
        v = majority3()
        assert dc.banzhaf_interaction(v, 0b001) == F(1, 2)
        assert dc.banzhaf_interaction(v, 0b011) == 0
        assert brute_derivative_average(v, 0b001) == F(1, 2)

    def test_additive_has_no_interaction(self):
        assert dc.banzhaf_interaction(additive(3), 0b011) == 0

    def test_empty_set_is_vertex_mean(self):
        v = majority3()
        assert dc.banzhaf_interaction(v, 0) == F(sum(v.values), 8)

    @pytest.mark.parametrize("seed", range(3))
    def test_table_matches_brute_force(self, seed):
        import random

        rng = random.Random(seed)
        v = SetFunction.from_callable(4, lambda S: F(rng.randint(-5, 5), rng.randint(1, 3)))
        table = dc.banzhaf_table(v)
        for S in range(16):
            assert table[S] == brute_derivative_average(v, S) == dc.discrete_derivative_average(v, S)


class TestBestApprox:
    def test_x1x2_k1(self):
        v = dc.vertex_values(MultilinearPoly(2, {0b11: 1}))
        assert dc.best_k_approx_discrete(v, 1).coeffs == {0: F(-1, 4), 1: F(1, 2), 2: F(1, 2)}

    def test_full_degree_is_mobius(self):
        v = majority3()
        assert dc.best_k_approx_discrete(v, 3).to_set_function() == dc.mobius(v)

    def test_degree_zero_is_mean(self):
        v = majority3()
        assert dc.best_k_approx_discrete(v, 0).coeffs == {0: F(1, 2)}

    def test_against_normal_equations(self):
        v = majority3()
        for k in range(4):
            assert dc.best_k_approx_discrete(v, k) == oracles.discrete_least_squares(v, k)


class TestExtension:
    def test_unanimity_is_monomial(self):
        v = SetFunction.from_callable(3, lambda S: 1 if S & 0b110 == 0b110 else 0)
        assert dc.multilinear_extension(v).coeffs == {0b110: 1}

    def test_constant(self):
        v = SetFunction.from_callable(2, lambda S: 3)
        assert dc.multilinear_extension(v).coeffs == {0: 3}
