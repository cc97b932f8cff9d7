"""Mean, standard deviation, normalised index and coefficients of determination."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import closed_forms as cf
from . import quadrature as qd
from . import subsets as sb
from .continuous import (
    DEFAULT_CONFIG,
    IntegratorConfig,
    Method,
    best_k_approx,
    interaction,
    interaction_table,
    poly_inner_product,
)
from .errors import DegenerateError, EvaluationError, InvalidArgument
from .model import (
    BlackBox,
    Choquet,
    FunctionSpec,
    GeometricMean,
    LinearCombination,
    Multilinear,
    MultilinearPoly,
    Multiplicative,
    PseudoMultilinear,
    Scalar,
    SetFunction,
    evaluate_batch,
    is_exact,
    variable_support,
)

SIMPLEX_MAX_N = 6
R2_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Moments:
    mean: Scalar
    variance: Scalar

    @property
    def sigma(self) -> float:
        return math.sqrt(max(float(self.variance), 0.0))


def _merge(spec: LinearCombination):
    """Collapse a combination of same-class specs into one spec, or return None."""
    terms = spec.terms
    if all(isinstance(s, Multilinear) for _, s in terms):
        poly = MultilinearPoly(spec.n, {})
        for c, s in terms:
            poly = poly + s.poly.scale(c)
        return Multilinear(poly)
    if all(isinstance(s, Choquet) or (isinstance(s, Multilinear) and s.poly.degree <= 0) for _, s in terms):
        # constants fold into the empty-set coefficient of a Lovász extension
        a = SetFunction.zeros(spec.n)
        for c, s in terms:
            a = a + (s.a if isinstance(s, Choquet) else SetFunction.from_dict(spec.n, s.poly.coeffs)).scale(c)
        return Choquet(a)
    return None


def second_moment(spec: FunctionSpec, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Scalar:
    """``∫ f²`` over the cube; exact for every structured class."""
    if isinstance(spec, Multilinear):
        return poly_inner_product(spec.poly, spec.poly)
    if isinstance(spec, Choquet):
        if spec.n <= SIMPLEX_MAX_N:
            return cf.choquet_second_moment_simplex(spec.a)
        return cf.choquet_second_moment_pairwise(spec.a)
    if isinstance(spec, PseudoMultilinear):
        return cf.pseudo_multilinear_second_moment(spec.poly, spec.transforms)
    if isinstance(spec, Multiplicative):
        return cf.multiplicative_second_moment(spec.transforms)
    if isinstance(spec, GeometricMean):
        return cf.geometric_mean_second_moment(spec.weights)
    if isinstance(spec, LinearCombination):
        merged = _merge(spec)
        if merged is not None:
            return second_moment(merged, cfg)
    return _numeric_second_moment(spec, cfg)


def _numeric_second_moment(spec: FunctionSpec, cfg: IntegratorConfig) -> float:
    n = spec.n
    if cfg.method is Method.MC:
        def draw(rng, size):
            return evaluate_batch(spec, rng.random((size, n))) ** 2

        return qd.monte_carlo(draw, cfg.samples, cfg.seed, cfg.lanes)[0]
    axes = sb.members(variable_support(spec))
    if isinstance(spec, BlackBox) and spec.lattice:
        rel, wts = qd.simplex_split_rule(len(axes), cfg.order)
    else:
        rel, wts = qd.tensor_rule(len(axes), cfg.order)
    pts = np.full((len(rel), n), 0.5)
    pts[:, axes] = rel
    vals = evaluate_batch(spec, pts)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("non-finite function value while integrating f²")
    return float(wts @ vals**2)


def moments(spec: FunctionSpec, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Moments:
    """Expectation and variance of ``f`` under the uniform distribution."""
    mean = interaction(spec, 0, cfg).value
    return Moments(mean, second_moment(spec, cfg) - mean * mean)


def _check_spread(m: Moments) -> None:
    v = m.variance
    if (is_exact(v) and v == 0) or (not is_exact(v) and v <= 1e-14 * (1 + float(m.mean) ** 2)):
        raise DegenerateError("f has zero variance; the normalised index is undefined")


def _signed_sqrt(x: Scalar, sign: Scalar) -> float:
    r = math.sqrt(float(x))
    return -r if sign < 0 else r


def normalized_index(spec: FunctionSpec, S: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    """``I(f, S) / (12^{|S|/2} σ(f))``, the correlation of ``f`` with ``w_S``."""
    if S == 0:
        raise InvalidArgument("the normalised index is defined for nonempty subsets only")
    m = moments(spec, cfg)
    _check_spread(m)
    value = interaction(spec, S, cfg).value
    return _signed_sqrt(value * value / (12 ** sb.popcount(S) * m.variance), value)


def r_squared(spec: FunctionSpec, k: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Scalar:
    """Share of the variance of ``f`` explained by its best approximation of degree ``k``."""
    m = moments(spec, cfg)
    _check_spread(m)
    table = interaction_table(spec, k, cfg)
    return _r2_from_values(table.values(), m.variance, k)


def _r2_from_values(values: dict, variance: Scalar, k: int) -> Scalar:
    total = Fraction(0)
    for T, v in values.items():
        if 1 <= sb.popcount(T) <= k:
            total = total + v * v / 12 ** sb.popcount(T)
    return total / variance


@dataclass(frozen=True)
class FitReport:
    mean: Scalar
    variance: Scalar
    r: dict = field(default_factory=dict)
    r2: tuple = ()

    @property
    def sigma(self) -> float:
        return math.sqrt(max(float(self.variance), 0.0))


def fit_report(spec: FunctionSpec, k: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> FitReport:
    """Mean, σ, normalised indexes for ``1 <= |S| <= k`` and ``R²_1 .. R²_k``.

    Each ``R²_j`` is computed from the index table and checked against
    ``σ²(f_j) / σ²(f)`` with ``f_j`` the projection polynomial.
    """
    m = moments(spec, cfg)
    _check_spread(m)
    table = interaction_table(spec, k, cfg).values()
    r = {}
    for S, v in table.items():
        if S:
            r[S] = _signed_sqrt(v * v / (12 ** sb.popcount(S) * m.variance), v)
    r2 = []
    for j in range(1, k + 1):
        from_r = _r2_from_values(table, m.variance, j)
        fj = best_k_approx(spec, j, cfg) if cfg.method is not Method.MC else None
        if fj is not None:
            var_j = poly_inner_product(fj, fj) - m.mean * m.mean
            ratio = var_j / m.variance
            exact = is_exact(ratio) and is_exact(from_r)
            if (exact and ratio != from_r) or (not exact and abs(float(ratio) - float(from_r)) > R2_TOLERANCE):
                raise EvaluationError(f"R² mismatch at k={j}: {float(from_r)} vs {float(ratio)}")
        r2.append(from_r)
    return FitReport(m.mean, m.variance, r, tuple(r2))
