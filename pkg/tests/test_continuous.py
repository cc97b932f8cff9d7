import math
from fractions import Fraction as F

import numpy as np
import pytest

from cube_interact import continuous as ct
from cube_interact import oracles
from cube_interact import quadrature as qd
from cube_interact.errors import DomainError, InvalidArgument, Unsupported
from cube_interact.expression import expression_spec
from cube_interact.model import (
    CLOSED_FORM,
    MONTE_CARLO,
    QUADRATURE,
    BlackBox,
    Choquet,
    Multilinear,
    MultilinearPoly,
    SetFunction,
    Tabulated,
    PseudoMultilinear,
    constant,
)


class TestIndex:
    def test_x1x2(self, x1x2):
        assert [ct.interaction(x1x2, S).value for S in range(4)] == [F(1, 4), F(1, 2), F(1, 2), 1]
        assert ct.interaction(x1x2, 3).method == CLOSED_FORM

    def test_constant(self):
        spec = constant(3, F(7, 2))
        assert all(ct.interaction(spec, S).value == 0 for S in range(1, 8))

    def test_table_rows_sorted(self, geo_half):
        table = ct.interaction_table(geo_half, 1)
        assert [S for S, _ in table.rows()] == [0, 1, 2]
        assert table.values() == {0: F(4, 9), 1: F(8, 15), 2: F(8, 15)}

    def test_geometric_quadrature_cross_check(self, geo_half):
        bb = BlackBox(2, lambda X: np.sqrt(X[:, 0] * X[:, 1]), vectorized=True)
        q = ct.interaction_table(bb, 1, ct.IntegratorConfig(order=40))
        assert q[0].method == QUADRATURE
        for S in range(3):
            assert abs(q[S].value - float(ct.interaction(geo_half, S).value)) < 1e-4

    def test_min_quadrature_on_lattice_blackbox(self):
        bb = expression_spec("min(x1, x2)", 2, lattice=True)
        assert abs(ct.interaction(bb, 0b11).value - 1.2) < 1e-12

    def test_quadrature_on_polynomial_is_exact(self):
        poly = MultilinearPoly(3, {0b111: 2, 0b001: F(-1, 3)})
        bb = BlackBox(3, lambda x: float(poly([F(t) for t in x])), vectorized=False)
        for S in range(8):
            assert abs(ct.interaction(bb, S).value - float(ct.index_from_poly_coeffs(poly, S))) < 1e-12

    def test_subset_outside_support(self):
        bb = expression_spec("x1^2", 3)
        assert ct.interaction(bb, 0b110).value == 0

    def test_closed_method_without_closed_form(self):
        with pytest.raises(Unsupported):
            ct.interaction(expression_spec("x1", 1), 1, ct.IntegratorConfig(method="closed"))

    def test_monte_carlo_method(self, x1x2):
        est = ct.interaction(x1x2, 3, ct.IntegratorConfig(method="mc", samples=50_000, seed=3))
        assert est.method == MONTE_CARLO
        assert abs(est.value - 1) < 4 * est.stderr

    def test_bad_config(self):
        with pytest.raises(InvalidArgument):
            ct.IntegratorConfig(order=0)


class TestPolynomialHelpers:
    def test_taylor(self, x1x2):
        assert ct.taylor_at_center(x1x2.poly, 0b01) == F(1, 2)
        assert ct.taylor_at_center(x1x2.poly, 0b11) == 1

    def test_centered_round_trip(self):
        poly = MultilinearPoly(3, {0b101: 3, 0b010: F(-2, 5), 0: 1})
        centered = {S: ct.index_from_poly_coeffs(poly, S) for S in range(8)}
        assert ct.poly_from_centered(3, centered) == poly

    def test_orthonormal_basis(self):
        for S in range(8):
            for T in range(8):
                assert abs(ct.basis_inner_product(S, T, 3) - (S == T)) < 1e-12


class TestBestApprox:
    def test_x1x2(self, x1x2):
        assert ct.best_k_approx(x1x2, 1).coeffs == {0: F(-1, 4), 1: F(1, 2), 2: F(1, 2)}

    def test_full_degree_returns_input(self, x1x2):
        assert ct.best_k_approx(x1x2, 2) == x1x2.poly

    def test_degree_zero_is_mean(self, min2):
        assert ct.best_k_approx(min2, 0).coeffs == {0: F(1, 3)}

    def test_oracle(self):
        poly = MultilinearPoly(3, {0b111: 1, 0b011: F(2, 3), 0b100: -1})
        for k in range(4):
            assert ct.best_k_approx(Multilinear(poly), k) == oracles.continuous_least_squares(poly, k)

    def test_min_k2_at_corner(self, min2):
        f2 = ct.best_k_approx(min2, 2)
        # centred expansion at (1,1): I(∅) + (I1 + I2)/2 + I12/4
        assert f2([1, 1]) == F(1, 3) + (F(1, 2) + F(1, 2)) / 2 + F(6, 5) / 4


class TestDifferences:
    def test_shift(self):
        f = Multilinear(MultilinearPoly(1, {1: 1}))
        assert ct.shift(f, 1, [F(1, 4)], [F(1, 2)]) == F(3, 4)

    def test_shift_min(self, min2):
        assert ct.shift(min2, 0b11, [F(1, 5)] * 2, [F(1, 10), F(3, 10)]) == F(3, 10)

    def test_box_volume(self, x1x2):
        h = [F(2, 5), F(7, 10)]
        assert ct.s_difference(x1x2, 0b11, h, [F(1, 10), F(1, 5)]) == F(7, 25)

    def test_additive_mixed_difference(self):
        f = Multilinear(MultilinearPoly(2, {1: 1, 2: 1}))
        assert ct.s_difference(f, 0b11, [F(1, 3), F(1, 7)], [F(1, 5), F(1, 2)]) == 0

    def test_empty_difference(self, x1x2):
        assert ct.s_difference(x1x2, 0, [0, 0], [F(1, 3), F(1, 2)]) == F(1, 6)

    def test_quotient(self, x1x2):
        assert ct.difference_quotient(x1x2, 0b01, [F(1, 2), 0], [F(1, 5), F(2, 5)]) == F(2, 5)

    def test_quotient_linear(self):
        f = Multilinear(MultilinearPoly(1, {1: F(7, 3), 0: 1}))
        for h in (F(1, 10), F(1, 2)):
            assert ct.difference_quotient(f, 1, [h], [F(1, 4)]) == F(7, 3)

    def test_leaving_cube(self, x1x2):
        with pytest.raises(DomainError):
            ct.s_difference(x1x2, 0b01, [F(3, 4), 0], [F(1, 2), F(1, 2)])


class TestEstimators:
    @pytest.mark.parametrize("kind", list(ct.EstimatorKind))
    def test_x1x2(self, x1x2, kind):
        est = ct.estimate(x1x2, 0b11, kind, 100_000, seed=7)
        # D^S(x1 x2) = 1, so the beta estimator is exact with zero spread
        assert abs(est.value - 1) <= 4 * est.stderr + 1e-12

    @pytest.mark.parametrize("kind", ["direct", "box", "quotient"])
    def test_min(self, min2, kind):
        est = ct.estimate(min2, 0b01, kind, 100_000, seed=7)
        assert abs(est.value - 0.5) < 4 * est.stderr

    def test_beta_refuses_choquet(self, min2):
        with pytest.raises(Unsupported):
            ct.estimate(min2, 0b01, "beta")

    def test_beta_refuses_tabulated(self):
        spec = PseudoMultilinear(MultilinearPoly(1, {1: 1}), (Tabulated((F(0), F(1)), (F(0), F(1))),))
        with pytest.raises(Unsupported):
            ct.estimate(spec, 1, "beta")

    def test_beta_blackbox_needs_smooth_flag(self):
        with pytest.raises(Unsupported):
            ct.estimate(expression_spec("x1*x2", 2), 0b11, "beta")
        est = ct.estimate(expression_spec("x1*x2", 2, smooth=True), 0b11, "beta", 20_000)
        assert est.biased and abs(est.value - 1) < 1e-3

    @pytest.mark.parametrize("kind", list(ct.EstimatorKind))
    def test_constant_is_exactly_zero(self, kind):
        est = ct.estimate(constant(2, 3), 0b01, kind, 5_000)
        assert est.value == 0 and est.stderr == 0

    def test_lane_count_invariance(self, min2, monkeypatch):
        runs = []
        for lanes in ("1", "3"):
            monkeypatch.setenv(qd.THREADS_ENV, lanes)
            runs.append(ct.estimate(min2, 0b11, "box", 60_000, seed=11))
        assert runs[0] == runs[1]

    def test_seed_changes_estimate(self, min2):
        a = ct.estimate(min2, 0b01, "box", 20_000, seed=1)
        b = ct.estimate(min2, 0b01, "box", 20_000, seed=2)
        assert a.value != b.value

    def test_too_few_samples(self, min2):
        with pytest.raises(InvalidArgument):
            ct.estimate(min2, 1, "box", 1)

    def test_beta_sampler_cdf(self):
        u = ct.sample_beta22(np.random.default_rng(0), (200_000,))
        assert abs(u.mean() - 0.5) < 0.005
        assert abs(u.var() - 0.05) < 0.002

    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_box_normaliser(self, s):
        est = ct.box_volume_normaliser((1 << s) - 1, 3, 100_000, seed=5)
        assert abs(est.value - 6.0**-s) < 4 * est.stderr


class TestDuality:
    def test_min_max(self, min2):
        d = ct.dual(min2)
        # max = x1 + x2 - min
        assert d.a.values == (0, 1, 1, -1)

    def test_self_dual_coordinate(self):
        f = Multilinear(MultilinearPoly(1, {1: 1}))
        assert ct.dual(f) == f
        fs, fa = ct.self_dual_split(f.poly)
        assert fs == f.poly and fa.coeffs == {}

    def test_zero_dual_is_one(self):
        assert ct.dual(constant(2, 0)).poly.coeffs == {0: 1}

    def test_x1x2_split(self, x1x2):
        fd = ct.dual(x1x2)
        assert fd.poly.coeffs == {1: 1, 2: 1, 3: -1}
        fs, fa = ct.self_dual_split(x1x2.poly)
        assert fs.coeffs == {1: F(1, 2), 2: F(1, 2)}
        assert fa.coeffs == {1: F(-1, 2), 2: F(-1, 2), 3: 1}

    def test_constant_half_self_dual(self):
        fs, fa = ct.self_dual_split(MultilinearPoly(2, {0: F(1, 2)}))
        assert fs.coeffs == {0: F(1, 2)} and fa.coeffs == {}

    def test_sign_flip_blackbox(self):
        bb = expression_spec("x1^2*x2", 2)
        d = ct.dual(bb)
        for S in range(1, 4):
            s = bin(S).count("1")
            assert math.isclose(ct.interaction(d, S).value, (-1) ** (s + 1) * ct.interaction(bb, S).value, abs_tol=1e-12)

    def test_geometric_mean_not_dualisable(self, geo_half):
        with pytest.raises(Unsupported):
            ct.dual(geo_half)

    def test_lemma_quadrature(self):
        for T in range(16):
            for S in range(16):
                want = 0 if S & ~T else ct.cf.min_moment(S, T)
                assert abs(ct.min_moment_quadrature(S, T) - float(want)) < 1e-10
