import math
from fractions import Fraction as F

import pytest

from cube_interact import stats
from cube_interact.errors import DegenerateError
from cube_interact.expression import expression_spec
from cube_interact.model import Choquet, Multilinear, MultilinearPoly, SetFunction, constant


def arith(n):
    return Multilinear(MultilinearPoly(n, {1 << i: F(1, n) for i in range(n)}))


def minimum(n):
    return Choquet(SetFunction.from_dict(n, {(1 << n) - 1: 1}))


class TestMoments:
    def test_x1x2(self, x1x2):
        m = stats.moments(x1x2)
        assert (m.mean, m.variance) == (F(1, 4), F(7, 144))

    def test_min(self, min2):
        assert math.isclose(stats.moments(min2).sigma, math.sqrt(2) / 6, rel_tol=1e-14)

    def test_constant(self):
        assert stats.moments(constant(2, 5)).variance == 0

    def test_large_choquet_uses_pairwise_route(self):
        n = 8
        # E[min²] - E[min]² for n uniforms
        want = F(2, (n + 1) * (n + 2)) - F(1, (n + 1) ** 2)
        assert stats.moments(minimum(n)).variance == want

    def test_blackbox_quadrature(self):
        m = stats.moments(expression_spec("x1*x2", 2))
        assert math.isclose(float(m.variance), 7 / 144, rel_tol=1e-12)


class TestNormalized:
    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_arith(self, n):
        assert math.isclose(stats.normalized_index(arith(n), 1), 1 / math.sqrt(n), rel_tol=1e-12)

    def test_min(self, min2):
        assert math.isclose(stats.normalized_index(min2, 1), 0.6123724356957945, rel_tol=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            stats.normalized_index(constant(2, 1), 1)

    def test_sign(self):
        f = Multilinear(MultilinearPoly(1, {1: -3}))
        assert stats.normalized_index(f, 1) == -1.0


class TestRSquared:
    def test_x1x2(self, x1x2):
        assert stats.r_squared(x1x2, 1) == F(6, 7)
        assert stats.r_squared(x1x2, 2) == 1

    def test_additive(self):
        assert stats.r_squared(arith(5), 1) == 1

    def test_fit_report(self, x1x2):
        rep = stats.fit_report(x1x2, 2)
        assert rep.mean == F(1, 4) and math.isclose(rep.sigma, math.sqrt(7) / 12)
        assert rep.r2 == (F(6, 7), 1)

    def test_fit_report_min3(self):
        rep = stats.fit_report(minimum(3), 1)
        assert all(math.isclose(r, math.sqrt(3 / 15)) for r in rep.r.values())
        assert rep.r2 == (F(3, 5),)

    def test_fit_report_degenerate(self):
        with pytest.raises(DegenerateError):
            stats.fit_report(constant(1, 2), 1)
