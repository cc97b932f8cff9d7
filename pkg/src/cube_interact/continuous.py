"""Interaction index of functions on the unit cube.

``interaction(f, S) = 12^{|S|} ∫ f(x) prod_{i∈S} (x_i - 1/2) dx``, i.e. the
coefficient of ``prod_{i∈S} x_i`` in the least-squares multilinear
approximation of ``f`` of degree ``|S|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import closed_forms as cf
from . import quadrature as qd
from . import subsets as sb
from .errors import DomainError, EvaluationError, InvalidArgument, Unsupported
from .model import (
    CLOSED_FORM,
    MONTE_CARLO,
    QUADRATURE,
    STRUCTURED,
    BlackBox,
    Choquet,
    Estimate,
    FunctionSpec,
    GeometricMean,
    InteractionTable,
    LinearCombination,
    Multilinear,
    MultilinearPoly,
    Multiplicative,
    PseudoMultilinear,
    Scalar,
    SetFunction,
    Tabulated,
    constant,
    evaluate,
    evaluate_batch,
    to_scalar,
    variable_support,
)

HALF = Fraction(1, 2)
FD_STEP = 1e-4
# normalisation of the index: 12 = 1 / ∫_0^1 t (t - 1/2) dt
SCALE = 12


class Method(str, enum.Enum):
    AUTO = "auto"
    CLOSED = "closed"
    QUAD = "quad"
    MC = "mc"


class EstimatorKind(str, enum.Enum):
    DIRECT = "direct"
    BETA = "beta"
    BOX = "box"
    QUOTIENT = "quotient"


@dataclass(frozen=True)
class IntegratorConfig:
    """How to obtain index values.

    ``auto`` uses exact closed forms when the function class has one and falls
    back to Gauss quadrature of ``order`` points per active axis otherwise.
    """

    method: Method = Method.AUTO
    order: int = qd.DEFAULT_ORDER
    samples: int = 100_000
    seed: int = 0
    lanes: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.order < 1:
            raise InvalidArgument("quadrature order must be >= 1")
        if self.samples < 1:
            raise InvalidArgument("sample count must be >= 1")


DEFAULT_CONFIG = IntegratorConfig()


# ---------------------------------------------------------------------------
# Polynomials and the orthonormal basis


def basis_eval(S: int, X: np.ndarray) -> np.ndarray:
    """``w_S(x) = 12^{|S|/2} prod_{i∈S} (x_i - 1/2)`` at each row of ``X``."""
    idx = sb.members(S)
    return SCALE ** (len(idx) / 2) * np.prod(X[:, idx] - 0.5, axis=1)


def basis_inner_product(S: int, T: int, n: int, order: int = qd.DEFAULT_ORDER) -> float:
    pts, wts = qd.tensor_rule(n, order)
    return float(wts @ (basis_eval(S, pts) * basis_eval(T, pts)))


def index_from_poly_coeffs(poly: MultilinearPoly, S: int) -> Scalar:
    """``sum_{T ⊇ S} (1/2)^{|T|-|S|} a(T)``: index of a multilinear polynomial."""
    sb.check_mask(S, poly.n)
    s = sb.popcount(S)
    # ∫ x_i (x_i - 1/2) = 1/12 on S, ∫ x_i = 1/2 on T \ S
    unit = Fraction(SCALE, 12) ** s
    total = Fraction(0)
    for T, c in poly.coeffs.items():
        if T & S == S:
            total = total + HALF ** (sb.popcount(T) - s) * c
    return unit * total


def derivative(poly: MultilinearPoly, S: int) -> MultilinearPoly:
    """Mixed partial ``D^S`` of a multilinear polynomial."""
    return MultilinearPoly(poly.n, {T & ~S: c for T, c in poly.coeffs.items() if T & S == S})


def taylor_at_center(poly: MultilinearPoly, S: int) -> Scalar:
    """``(D^S poly)(1/2, ..., 1/2)``."""
    sb.check_mask(S, poly.n)
    return derivative(poly, S)([HALF] * poly.n)


def poly_inner_product(p: MultilinearPoly, q: MultilinearPoly) -> Scalar:
    """``∫ p q`` over the cube, using ``∫ x_i = 1/2`` and ``∫ x_i² = 1/3``."""
    total = Fraction(0)
    for S, a in p.coeffs.items():
        for T, b in q.coeffs.items():
            total = total + a * b * Fraction(1, 2 ** sb.popcount(S ^ T) * 3 ** sb.popcount(S & T))
    return total


def poly_from_centered(n: int, centered: dict) -> MultilinearPoly:
    """Monomial coefficients of ``sum_T I(T) prod_{i∈T} (x_i - 1/2)``.

    ``a(S) = sum_{T ⊇ S} (-1/2)^{|T|-|S|} I(T)`` over the given ``T``.
    """
    coeffs: dict = {}
    for T, value in centered.items():
        t = sb.popcount(T)
        for S in sb.subsets_of(T):
            coeffs[S] = coeffs.get(S, 0) + (-HALF) ** (t - sb.popcount(S)) * value
    return MultilinearPoly(n, coeffs)


# ---------------------------------------------------------------------------
# The index


def has_closed_form(spec: FunctionSpec) -> bool:
    if isinstance(spec, STRUCTURED):
        return True
    if isinstance(spec, LinearCombination):
        return all(has_closed_form(s) for _, s in spec.terms)
    return False


def closed_form_index(spec: FunctionSpec, S: int) -> Scalar:
    sb.check_mask(S, spec.n)
    if isinstance(spec, Multilinear):
        return index_from_poly_coeffs(spec.poly, S)
    if isinstance(spec, Choquet):
        return cf.choquet_interaction(spec.a, S)
    if isinstance(spec, PseudoMultilinear):
        return cf.pseudo_multilinear_interaction(spec.poly, spec.transforms, S)
    if isinstance(spec, Multiplicative):
        return cf.multiplicative_interaction(spec.transforms, S)
    if isinstance(spec, GeometricMean):
        return cf.geometric_mean_interaction(spec.weights, S)
    if isinstance(spec, LinearCombination):
        return sum((c * closed_form_index(s, S) for c, s in spec.terms), Fraction(0))
    raise Unsupported(f"no closed form for {type(spec).__name__}")


def _resolve(spec: FunctionSpec, cfg: IntegratorConfig) -> Method:
    if cfg.method in (Method.AUTO, Method.CLOSED):
        if has_closed_form(spec):
            return Method.CLOSED
        if cfg.method is Method.CLOSED:
            raise Unsupported(f"no closed form for {type(spec).__name__}")
        return Method.QUAD
    return cfg.method


def interaction(spec: FunctionSpec, S: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Estimate:
    """Index of ``spec`` on the subset mask ``S``, with provenance."""
    sb.check_mask(S, spec.n)
    method = _resolve(spec, cfg)
    if method is Method.CLOSED:
        return Estimate(closed_form_index(spec, S), CLOSED_FORM)
    if method is Method.QUAD:
        return Estimate(quadrature_table(spec, [S], cfg.order)[S], QUADRATURE)
    return estimate(spec, S, EstimatorKind.DIRECT, cfg.samples, cfg.seed, cfg.lanes)


def interaction_table(spec: FunctionSpec, k: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> InteractionTable:
    """Indexes of every subset with at most ``k`` elements."""
    masks = list(sb.subsets_of_size_at_most(spec.n, k))
    method = _resolve(spec, cfg)
    if method is Method.CLOSED:
        entries = {S: Estimate(closed_form_index(spec, S), CLOSED_FORM) for S in masks}
    elif method is Method.QUAD:
        vals = quadrature_table(spec, masks, cfg.order)
        entries = {S: Estimate(vals[S], QUADRATURE) for S in masks}
    else:
        entries = {S: estimate(spec, S, EstimatorKind.DIRECT, cfg.samples, cfg.seed, cfg.lanes) for S in masks}
    return InteractionTable(spec.n, entries)


def best_k_approx(spec: FunctionSpec, k: int, cfg: IntegratorConfig = DEFAULT_CONFIG) -> MultilinearPoly:
    """Least-squares projection of ``spec`` onto multilinear polynomials of degree <= k."""
    table = interaction_table(spec, k, cfg)
    return poly_from_centered(spec.n, table.values())


# ---------------------------------------------------------------------------
# Quadrature


def quadrature_table(spec: FunctionSpec, masks, order: int = qd.DEFAULT_ORDER) -> dict[int, float]:
    """Quadrature values of the index for each mask in ``masks``.

    Choquet terms and ``lattice`` black boxes use the simplex-split rule, which
    is exact for their piecewise-polynomial integrands; everything else uses the
    tensor Gauss rule over the variables the function can depend on.
    """
    masks = list(masks)
    if isinstance(spec, LinearCombination):
        out = {S: 0.0 for S in masks}
        for c, s in spec.terms:
            part = quadrature_table(s, masks, order)
            for S in masks:
                out[S] += float(c) * part[S]
        return out
    if isinstance(spec, Choquet):
        return {S: sum(float(a) * lovasz_term_quadrature(S, T, order) for T, a in spec.a.nonzero()) for S in masks}

    n = spec.n
    active = variable_support(spec)
    axes = sb.members(active)
    if isinstance(spec, BlackBox) and spec.lattice:
        rel_pts, wts = qd.simplex_split_rule(len(axes), order)
    else:
        rel_pts, wts = qd.tensor_rule(len(axes), order)
    pts = np.full((len(rel_pts), n), 0.5)
    pts[:, axes] = rel_pts
    try:
        fvals = evaluate_batch(spec, pts)
    except Exception as exc:  # evaluator failures surface as evaluation errors
        raise EvaluationError(f"evaluation failed during quadrature: {exc}") from exc
    if not np.all(np.isfinite(fvals)):
        raise EvaluationError("non-finite function value at a quadrature node")
    out = {}
    for S in masks:
        if S & ~active:
            out[S] = 0.0
            continue
        idx = sb.members(S)
        weight = float(SCALE) ** len(idx) * np.prod(pts[:, idx] - 0.5, axis=1)
        out[S] = float(wts @ (fvals * weight))
    return out


def lovasz_term_quadrature(S: int, T: int, order: int = qd.DEFAULT_ORDER) -> float:
    """``12^{|S|} ∫ min_{i∈T} x_i prod_{i∈S} (x_i - 1/2) dx`` by simplex-split quadrature."""
    return float(SCALE) ** sb.popcount(S) * min_moment_quadrature(S, T, order)


def min_moment_quadrature(S: int, T: int, order: int = qd.DEFAULT_ORDER) -> float:
    """``∫ min_{i∈T} x_i prod_{i∈S} (x_i - 1/2) dx`` (empty min = 1), numerically."""
    axes = sb.members(S | T)
    pts, wts = qd.simplex_split_rule(len(axes), order)
    pos = {v: j for j, v in enumerate(axes)}
    tcols = [pos[i] for i in sb.members(T)]
    scols = [pos[i] for i in sb.members(S)]
    m = pts[:, tcols].min(axis=1) if tcols else 1.0
    return float(wts @ (m * np.prod(pts[:, scols] - 0.5, axis=1)))


# ---------------------------------------------------------------------------
# Shift and difference operators


def _shifted(x, h, T: int, n: int) -> list:
    x = list(x)
    if len(x) != n or len(h) != n:
        raise InvalidArgument(f"x and h must have {n} coordinates")
    y = list(x)
    for i in sb.members(T):
        y[i] = x[i] + h[i]
        if not 0 <= y[i] <= 1:
            raise DomainError(f"shifted coordinate {i + 1} = {y[i]} leaves [0, 1]")
    return y


def shift(spec: FunctionSpec, S: int, h, x) -> Scalar:
    """``f(x + sum_{j∈S} h_j e_j)``."""
    sb.check_mask(S, spec.n)
    return evaluate(spec, _shifted(x, h, S, spec.n))


def s_difference(spec: FunctionSpec, S: int, h, x) -> Scalar:
    """``sum_{T ⊆ S} (-1)^{|S|-|T|} f(x + sum_{j∈T} h_j e_j)``."""
    sb.check_mask(S, spec.n)
    _shifted(x, h, S, spec.n)
    s = sb.popcount(S)
    total = Fraction(0)
    for T in sb.subsets_of(S):
        term = evaluate(spec, _shifted(x, h, T, spec.n))
        total = total + (term if (s - sb.popcount(T)) % 2 == 0 else -term)
    return total


def difference_quotient(spec: FunctionSpec, S: int, h, x) -> Scalar:
    """``s_difference / prod_{i∈S} h_i``."""
    sb.check_mask(S, spec.n)
    denom = Fraction(1)
    for i in sb.members(S):
        if h[i] == 0:
            raise InvalidArgument(f"h_{i + 1} must be nonzero")
        denom = denom * h[i]
    return s_difference(spec, S, h, x) / denom


def _box_difference(spec: FunctionSpec, S: int, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Vectorised ``Δ^S_{y-x} f(x)`` for rows of ``X`` (``Y`` used on the S columns)."""
    s = sb.popcount(S)
    out = np.zeros(len(X))
    for T in sb.subsets_of(S):
        Z = X.copy()
        idx = sb.members(T)
        Z[:, idx] = Y[:, idx]
        sign = -1.0 if (s - len(idx)) % 2 else 1.0
        out += sign * evaluate_batch(spec, Z)
    return out


# ---------------------------------------------------------------------------
# Monte Carlo estimators


def sample_beta22(rng: np.random.Generator, shape) -> np.ndarray:
    """Beta(2, 2) draws: invert the CDF ``3t² - 2t³`` by bisection to 1e-12."""
    u = rng.random(shape)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    while True:
        mid = (lo + hi) / 2
        below = 3 * mid**2 - 2 * mid**3 < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo, initial=0.0) <= 1e-12:
            return (lo + hi) / 2


def partial_batch(spec: FunctionSpec, S: int, X: np.ndarray) -> tuple[np.ndarray, bool]:
    """``D^S f`` at each row of ``X``; the flag reports a finite-difference (biased) value."""
    if isinstance(spec, Multilinear):
        return evaluate_batch(Multilinear(derivative(spec.poly, S)), X), False
    if isinstance(spec, (PseudoMultilinear, Multiplicative)):
        for i in sb.members(S):
            if isinstance(spec.transforms[i], Tabulated):
                raise Unsupported(f"tabulated transform on variable {i + 1} has no continuous derivative")
        cols = []
        for i, phi in enumerate(spec.transforms):
            cols.append(phi.derivative(X[:, i]) if S >> i & 1 else phi.batch(X[:, i]))
        Y = np.column_stack(cols)
        if isinstance(spec, Multiplicative):
            return np.prod(Y, axis=1), False
        # only monomials containing S survive, and they use phi' on S
        return evaluate_batch(Multilinear(MultilinearPoly(spec.n, {T: c for T, c in spec.poly.coeffs.items() if T & S == S})), Y), False
    if isinstance(spec, GeometricMean):
        out = np.ones(len(X))
        with np.errstate(divide="ignore"):
            for i, c in enumerate(spec.weights):
                c = float(c)
                if S >> i & 1:
                    out *= c * np.power(X[:, i], c - 1.0) if c else 0.0
                elif c:
                    out *= np.power(X[:, i], c)
        return out, False
    if isinstance(spec, BlackBox):
        if not spec.smooth:
            raise Unsupported("derivative estimator needs a black box declared smooth")
        idx = sb.members(S)
        C = X.copy()
        C[:, idx] = np.clip(C[:, idx], FD_STEP, 1 - FD_STEP)
        out = np.zeros(len(X))
        for T in sb.subsets_of(S):
            Z = C.copy()
            plus = sb.members(T)
            minus = sb.members(S & ~T)
            Z[:, plus] += FD_STEP
            Z[:, minus] -= FD_STEP
            sign = -1.0 if len(minus) % 2 else 1.0
            out += sign * evaluate_batch(spec, Z)
        return out / (2 * FD_STEP) ** len(idx), True
    if isinstance(spec, LinearCombination):
        total = np.zeros(len(X))
        biased = False
        for c, s in spec.terms:
            part, b = partial_batch(s, S, X)
            total += float(c) * part
            biased |= b
        return total, biased
    raise Unsupported(f"{type(spec).__name__} has no continuous mixed partials; use box or quotient")


def estimate(
    spec: FunctionSpec,
    S: int,
    kind: EstimatorKind = EstimatorKind.BOX,
    samples: int = 100_000,
    seed: int = 0,
    lanes: int | None = None,
) -> Estimate:
    """Monte Carlo estimate of the index by one of four equivalent representations.

    * ``direct``: ``12^{|S|} f(x) prod_{i∈S}(x_i - 1/2)``, x uniform.
    * ``beta``: ``D^S f(x)`` with ``x_i ~ Beta(2, 2)`` on S, uniform elsewhere.
    * ``box``: ``6^{|S|} prod_{i∈S}(1 - x_i) · Δ^S_{y-x} f(x)``, x uniform,
      ``y_i`` uniform on ``[x_i, 1]``.
    * ``quotient``: the S-difference quotient with ``(x_i, y_i)`` distributed
      as the (min, max) of three uniforms, i.e. density ``6 (y_i - x_i)``.
    """
    kind = EstimatorKind(kind)
    n = spec.n
    sb.check_mask(S, n)
    idx = sb.members(S)
    s = len(idx)
    biased = False

    if S & ~variable_support(spec):
        # an ineffective variable in S makes every representation vanish
        return Estimate(0.0, MONTE_CARLO, 0.0)

    if kind is EstimatorKind.BETA:
        # probe support early so unsupported specs fail before sampling
        _, biased = partial_batch(spec, S, np.full((1, n), 0.5))

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        if kind is EstimatorKind.DIRECT:
            X = rng.random((size, n))
            return float(SCALE) ** s * evaluate_batch(spec, X) * np.prod(X[:, idx] - 0.5, axis=1)
        if kind is EstimatorKind.BETA:
            X = rng.random((size, n))
            X[:, idx] = sample_beta22(rng, (size, s))
            return partial_batch(spec, S, X)[0]
        if kind is EstimatorKind.BOX:
            X = rng.random((size, n))
            Y = X.copy()
            Y[:, idx] = X[:, idx] + (1 - X[:, idx]) * rng.random((size, s))
            return 6.0**s * np.prod(1 - X[:, idx], axis=1) * _box_difference(spec, S, X, Y)
        X = rng.random((size, n))
        triple = np.sort(rng.random((size, s, 3)), axis=2)
        Y = X.copy()
        X[:, idx] = triple[:, :, 0]
        Y[:, idx] = triple[:, :, 2]
        vol = np.prod(Y[:, idx] - X[:, idx], axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = _box_difference(spec, S, X, Y) / vol
        return np.where(vol > 0, q, 0.0)

    try:
        value, stderr = qd.monte_carlo(draw, samples, seed, lanes)
    except (Unsupported, InvalidArgument):
        raise
    except Exception as exc:
        raise EvaluationError(f"evaluation failed during sampling: {exc}") from exc
    if not (math.isfinite(value) and math.isfinite(stderr)):
        raise EvaluationError("non-finite Monte Carlo estimate")
    return Estimate(value, MONTE_CARLO, stderr, biased)


def box_volume_normaliser(S: int, n: int, samples: int = 100_000, seed: int = 0) -> Estimate:
    """Monte Carlo value of ``∫∫ Δ^S_{y-x} v_S(x) dy_S dx`` (should be ``6^{-|S|}``)."""
    v_S = Multilinear(MultilinearPoly(n, {S: 1}))
    est = estimate(v_S, S, EstimatorKind.BOX, samples, seed)
    scale = 6.0 ** -sb.popcount(S)
    return Estimate(est.value * scale, MONTE_CARLO, est.stderr * scale)


# ---------------------------------------------------------------------------
# Duality


def dual_poly(poly: MultilinearPoly) -> MultilinearPoly:
    """Coefficients of ``1 - p(1 - x)``."""
    coeffs: dict = {0: Fraction(1)}
    for T, c in poly.coeffs.items():
        for U in sb.subsets_of(T):
            coeffs[U] = coeffs.get(U, 0) - c * (-1) ** sb.popcount(U)
    return MultilinearPoly(poly.n, coeffs)


def dual_capacity(a: SetFunction) -> SetFunction:
    """Lovász coefficients of ``1 - f(1 - x)`` for ``f = sum_T a(T) min_T x``.

    Uses ``max_T x = sum_{∅≠U⊆T} (-1)^{|U|+1} min_U x``.
    """
    vals = [Fraction(0)] * (1 << a.n)
    vals[0] = 1 - sum(a.values, Fraction(0))
    for T, aT in a.nonzero():
        if T == 0:
            continue
        for U in sb.subsets_of(T):
            if U:
                vals[U] += aT if sb.popcount(U) % 2 else -aT
    return SetFunction(a.n, tuple(vals))


def dual(spec: FunctionSpec) -> FunctionSpec:
    """Spec of ``x -> 1 - f(1 - x)``."""
    if isinstance(spec, Multilinear):
        return Multilinear(dual_poly(spec.poly))
    if isinstance(spec, Choquet):
        return Choquet(dual_capacity(spec.a))
    if isinstance(spec, BlackBox):
        inner = spec.fn
        if spec.vectorized:
            fn = lambda X: 1.0 - np.asarray(inner(1.0 - np.asarray(X)))  # noqa: E731
        else:
            fn = lambda x: 1 - inner([1 - t for t in x])  # noqa: E731
        return BlackBox(spec.n, fn, spec.smooth, spec.vectorized, spec.support, spec.lattice, spec.label)
    if isinstance(spec, LinearCombination):
        # (sum c_j f_j)^d = sum c_j f_j^d + (1 - sum c_j)
        rest = 1 - sum((c for c, _ in spec.terms), Fraction(0))
        terms = [(c, dual(s)) for c, s in spec.terms]
        terms.append((to_scalar(rest), constant(spec.n, 1)))
        return LinearCombination(tuple(terms))
    raise Unsupported(f"{type(spec).__name__} is not closed under dualisation; wrap it as a BlackBox")


def self_dual_split(f):
    """``(f^s, f^a) = ((f + f^d)/2, (f - f^d)/2)`` for a polynomial or a dualisable spec."""
    if isinstance(f, MultilinearPoly):
        d = dual_poly(f)
        return (f + d).scale(HALF), (f - d).scale(HALF)
    if isinstance(f, Multilinear):
        s, a = self_dual_split(f.poly)
        return Multilinear(s), Multilinear(a)
    if isinstance(f, Choquet):
        d = dual_capacity(f.a)
        return Choquet((f.a + d).scale(HALF)), Choquet((f.a - d).scale(HALF))
    d = dual(f)
    return (
        LinearCombination(((HALF, f), (HALF, d))),
        LinearCombination(((HALF, f), (-HALF, d))),
    )
