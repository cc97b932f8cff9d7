"""Set functions, multilinear polynomials and the function-spec data model.

Scalars are either exact :class:`fractions.Fraction` values or Python floats.
Integers and ``"p/q"`` strings are promoted to ``Fraction`` so that all
structured computations stay exact unless a float enters on purpose.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import subsets as sb
from .errors import DomainError, InvalidArgument

Scalar = Union[Fraction, float]


def to_scalar(x) -> Scalar:
    """Promote ``x`` to a library scalar (Fraction unless it is a float)."""
    if isinstance(x, bool):
        raise InvalidArgument("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidArgument(f"cannot parse {x!r} as a rational") from None
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise InvalidArgument(f"non-finite scalar {x}")
        return x
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise InvalidArgument(f"unsupported scalar type {type(x).__name__}")


def is_exact(x) -> bool:
    return isinstance(x, Fraction)


# ---------------------------------------------------------------------------
# Set functions and polynomials


@dataclass(frozen=True)
class SetFunction:
    """Dense table ``S -> value`` over all ``2**n`` subsets of N."""

    n: int
    values: tuple

    def __post_init__(self):
        sb.check_n(self.n)
        if self.n > sb.MAX_DENSE_N:
            raise InvalidArgument(f"dense set functions are limited to n <= {sb.MAX_DENSE_N}")
        if len(self.values) != 1 << self.n:
            raise InvalidArgument(f"expected {1 << self.n} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(to_scalar(v) for v in self.values))

    @classmethod
    def zeros(cls, n: int) -> SetFunction:
        return cls(n, (Fraction(0),) * (1 << n))

    @classmethod
    def from_dict(cls, n: int, entries: Mapping[int, object]) -> SetFunction:
        vals: list = [Fraction(0)] * (1 << n)
        for S, v in entries.items():
            sb.check_mask(S, n)
            vals[S] = v
        return cls(n, tuple(vals))

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], object]) -> SetFunction:
        return cls(n, tuple(fn(S) for S in range(1 << n)))

    def __getitem__(self, S: int):
        return self.values[S]

    def __len__(self) -> int:
        return len(self.values)

    def nonzero(self) -> list[tuple[int, Scalar]]:
        return [(S, v) for S, v in enumerate(self.values) if v != 0]

    def __add__(self, other: SetFunction) -> SetFunction:
        _same_n(self.n, other.n)
        return SetFunction(self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: SetFunction) -> SetFunction:
        return self + other.scale(-1)

    def scale(self, c) -> SetFunction:
        c = to_scalar(c)
        return SetFunction(self.n, tuple(c * v for v in self.values))


@dataclass(frozen=True)
class MultilinearPoly:
    """``sum_S coeffs[S] * prod_{i in S} x_i``, stored sparsely (zeros dropped)."""

    n: int
    coeffs: Mapping[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        sb.check_n(self.n)
        clean = {}
        for S, c in self.coeffs.items():
            sb.check_mask(S, self.n)
            c = to_scalar(c)
            if c != 0:
                clean[S] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, n: int, c) -> MultilinearPoly:
        return cls(n, {0: c})

    @classmethod
    def from_set_function(cls, a: SetFunction) -> MultilinearPoly:
        return cls(a.n, dict(a.nonzero()))

    def to_set_function(self) -> SetFunction:
        return SetFunction.from_dict(self.n, self.coeffs)

    def __getitem__(self, S: int) -> Scalar:
        return self.coeffs.get(S, Fraction(0))

    @property
    def degree(self) -> int:
        """Largest monomial size with a nonzero coefficient (-1 for the zero poly)."""
        return max((sb.popcount(S) for S in self.coeffs), default=-1)

    @property
    def support(self) -> int:
        out = 0
        for S in self.coeffs:
            out |= S
        return out

    def __add__(self, other: MultilinearPoly) -> MultilinearPoly:
        _same_n(self.n, other.n)
        out = dict(self.coeffs)
        for S, c in other.coeffs.items():
            out[S] = out.get(S, 0) + c
        return MultilinearPoly(self.n, out)

    def __sub__(self, other: MultilinearPoly) -> MultilinearPoly:
        return self + other.scale(-1)

    def scale(self, c) -> MultilinearPoly:
        c = to_scalar(c)
        return MultilinearPoly(self.n, {S: c * v for S, v in self.coeffs.items()})

    def __call__(self, x: Sequence) -> Scalar:
        total = Fraction(0)
        for S, c in self.coeffs.items():
            term = c
            for i in sb.members(S):
                term = term * x[i]
            total = total + term
        return total


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise InvalidArgument(f"ground-set sizes differ ({a} vs {b})")


# ---------------------------------------------------------------------------
# Unary transforms for pseudo-multilinear and multiplicative functions


@dataclass(frozen=True)
class Identity:
    def __call__(self, t):
        return t

    def batch(self, t: np.ndarray) -> np.ndarray:
        return t

    def derivative(self, t: np.ndarray) -> np.ndarray:
        return np.ones_like(t)


@dataclass(frozen=True)
class Power:
    """``t ** exponent`` with ``exponent >= 0`` (``0 ** 0`` is 1)."""

    exponent: Scalar

    def __post_init__(self):
        c = to_scalar(self.exponent)
        if c < 0:
            raise InvalidArgument(f"power exponent must be >= 0, got {c}")
        object.__setattr__(self, "exponent", c)

    def __call__(self, t):
        c = self.exponent
        if is_exact(c) and c.denominator == 1:
            return t ** int(c)
        return float(t) ** float(c)

    def batch(self, t: np.ndarray) -> np.ndarray:
        return np.power(t, float(self.exponent))

    def derivative(self, t: np.ndarray) -> np.ndarray:
        c = float(self.exponent)
        if c == 0:
            return np.zeros_like(t)
        with np.errstate(divide="ignore"):
            return c * np.power(t, c - 1.0)


@dataclass(frozen=True)
class Affine:
    """``slope * t + intercept``."""

    slope: Scalar
    intercept: Scalar

    def __post_init__(self):
        object.__setattr__(self, "slope", to_scalar(self.slope))
        object.__setattr__(self, "intercept", to_scalar(self.intercept))

    def __call__(self, t):
        return self.slope * t + self.intercept

    def batch(self, t: np.ndarray) -> np.ndarray:
        return float(self.slope) * t + float(self.intercept)

    def derivative(self, t: np.ndarray) -> np.ndarray:
        return np.full_like(t, float(self.slope))


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear interpolant through ``(knots[j], values[j])``.

    Knots must be strictly increasing and span exactly [0, 1].
    """

    knots: tuple
    values: tuple

    def __post_init__(self):
        knots = tuple(to_scalar(k) for k in self.knots)
        values = tuple(to_scalar(v) for v in self.values)
        if len(knots) < 2 or len(knots) != len(values):
            raise InvalidArgument("tabulated transform needs >= 2 knots and one value per knot")
        if knots[0] != 0 or knots[-1] != 1:
            raise InvalidArgument("tabulated knots must start at 0 and end at 1")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise InvalidArgument("tabulated knots must be strictly increasing")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def segments(self):
        k, v = self.knots, self.values
        return [(k[j], k[j + 1], v[j], v[j + 1]) for j in range(len(k) - 1)]

    def __call__(self, t):
        for a, b, ya, yb in self.segments():
            if t <= b:
                return ya + (yb - ya) * (t - a) / (b - a)
        return self.values[-1]

    def batch(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, [float(k) for k in self.knots], [float(v) for v in self.values])

    derivative = None  # slopes jump at the knots


UnaryTransform = Union[Identity, Power, Affine, Tabulated]


def _check_transforms(n: int, transforms) -> tuple:
    transforms = tuple(transforms)
    if len(transforms) != n:
        raise InvalidArgument(f"expected {n} unary transforms, got {len(transforms)}")
    for phi in transforms:
        if not isinstance(phi, (Identity, Power, Affine, Tabulated)):
            raise InvalidArgument(f"unknown unary transform {phi!r}")
    return transforms


# ---------------------------------------------------------------------------
# Function specs


@dataclass(frozen=True)
class Multilinear:
    poly: MultilinearPoly

    @property
    def n(self) -> int:
        return self.poly.n


@dataclass(frozen=True)
class Choquet:
    """Lovász extension ``sum_T a(T) * min_{i in T} x_i``; the empty min is 1."""

    a: SetFunction

    @property
    def n(self) -> int:
        return self.a.n


@dataclass(frozen=True)
class PseudoMultilinear:
    """``g(phi_1(x_1), ..., phi_n(x_n))`` for a multilinear ``g``."""

    poly: MultilinearPoly
    transforms: tuple

    def __post_init__(self):
        object.__setattr__(self, "transforms", _check_transforms(self.poly.n, self.transforms))

    @property
    def n(self) -> int:
        return self.poly.n


@dataclass(frozen=True)
class Multiplicative:
    """``prod_i phi_i(x_i)``."""

    transforms: tuple

    def __post_init__(self):
        object.__setattr__(self, "transforms", _check_transforms(len(tuple(self.transforms)), self.transforms))
        sb.check_n(len(self.transforms))

    @property
    def n(self) -> int:
        return len(self.transforms)


@dataclass(frozen=True)
class GeometricMean:
    """``prod_i x_i ** c_i`` with ``c_i >= 0`` and ``sum c_i == 1``."""

    weights: tuple

    def __post_init__(self):
        w = tuple(to_scalar(c) for c in self.weights)
        sb.check_n(len(w))
        if any(c < 0 for c in w):
            raise InvalidArgument("geometric-mean weights must be nonnegative")
        total = sum(w, Fraction(0))
        if all(is_exact(c) for c in w):
            if total != 1:
                raise InvalidArgument(f"geometric-mean weights sum to {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise InvalidArgument(f"geometric-mean weights sum to {float(total)}, not 1")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class BlackBox:
    """Opaque evaluator on [0, 1]^n.

    ``fn`` maps one point (length-n sequence) to a number, or, when
    ``vectorized`` is set, an ``(M, n)`` array to an ``(M,)`` array.
    ``smooth`` declares continuous mixed partials on the open cube;
    ``support`` optionally declares the mask of variables ``fn`` depends on;
    ``lattice`` declares that ``fn`` is polynomial on each order simplex
    ``x_{s(1)} <= ... <= x_{s(n)}`` (min/max compositions), which enables
    exact simplex-split quadrature. The caller guarantees ``fn`` is reentrant.
    """

    n: int
    fn: Callable
    smooth: bool = False
    vectorized: bool = False
    support: int | None = None
    lattice: bool = False
    label: str = ""

    def __post_init__(self):
        sb.check_n(self.n)
        if self.support is not None:
            sb.check_mask(self.support, self.n)


@dataclass(frozen=True)
class LinearCombination:
    """``sum_j c_j * f_j`` over specs sharing the same ``n``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((to_scalar(c), s) for c, s in self.terms)
        if not terms:
            raise InvalidArgument("empty linear combination")
        n = terms[0][1].n
        for _, s in terms:
            _same_n(n, s.n)
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return self.terms[0][1].n


FunctionSpec = Union[Multilinear, Choquet, PseudoMultilinear, Multiplicative, GeometricMean, BlackBox, LinearCombination]
STRUCTURED = (Multilinear, Choquet, PseudoMultilinear, Multiplicative, GeometricMean)


def constant(n: int, c) -> Multilinear:
    return Multilinear(MultilinearPoly.constant(n, c))


def variable_support(spec: FunctionSpec) -> int:
    """Mask of variables the function can depend on (a superset of the effective ones)."""
    n = spec.n
    if isinstance(spec, (Multilinear, PseudoMultilinear)):
        return spec.poly.support
    if isinstance(spec, Choquet):
        out = 0
        for T, _ in spec.a.nonzero():
            out |= T
        return out
    if isinstance(spec, Multiplicative):
        return sb.full_mask(n)
    if isinstance(spec, GeometricMean):
        return sb.mask_of(i for i, c in enumerate(spec.weights) if c != 0)
    if isinstance(spec, BlackBox):
        return sb.full_mask(n) if spec.support is None else spec.support
    out = 0
    for c, s in spec.terms:
        if c != 0:
            out |= variable_support(s)
    return out


# ---------------------------------------------------------------------------
# Evaluation


def _check_point(x, n: int) -> list:
    x = list(x)
    if len(x) != n:
        raise InvalidArgument(f"point has {len(x)} coordinates, expected {n}")
    for v in x:
        if isinstance(v, float) and math.isnan(v):
            raise InvalidArgument("NaN coordinate")
        if not 0 <= v <= 1:
            raise DomainError(f"coordinate {v} outside [0, 1]")
    return x


def evaluate(spec: FunctionSpec, x: Sequence) -> Scalar:
    """``f(x)`` for one point. Rational points on rational specs give exact results."""
    x = _check_point(x, spec.n)
    return _eval(spec, x)


def _eval(spec, x):
    if isinstance(spec, Multilinear):
        return spec.poly(x)
    if isinstance(spec, Choquet):
        total = Fraction(0)
        for T, a in spec.a.nonzero():
            total = total + a * (min(x[i] for i in sb.members(T)) if T else 1)
        return total
    if isinstance(spec, PseudoMultilinear):
        return spec.poly([phi(t) for phi, t in zip(spec.transforms, x)])
    if isinstance(spec, Multiplicative):
        out = Fraction(1)
        for phi, t in zip(spec.transforms, x):
            out = out * phi(t)
        return out
    if isinstance(spec, GeometricMean):
        out = 1.0
        for c, t in zip(spec.weights, x):
            if c != 0:
                out *= float(t) ** float(c)
        return out
    if isinstance(spec, BlackBox):
        if spec.vectorized:
            return float(np.asarray(spec.fn(np.asarray([x], dtype=float)))[0])
        return spec.fn(x)
    return sum((c * _eval(s, x) for c, s in spec.terms), Fraction(0))


def evaluate_batch(spec: FunctionSpec, X: np.ndarray) -> np.ndarray:
    """Float evaluation at each row of the ``(M, n)`` array ``X``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.n:
        raise InvalidArgument(f"expected an (M, {spec.n}) array, got shape {X.shape}")
    if isinstance(spec, Multilinear):
        return _poly_batch(spec.poly, X)
    if isinstance(spec, Choquet):
        out = np.zeros(len(X))
        for T, a in spec.a.nonzero():
            out += float(a) * (X[:, sb.members(T)].min(axis=1) if T else 1.0)
        return out
    if isinstance(spec, PseudoMultilinear):
        Y = np.column_stack([phi.batch(X[:, i]) for i, phi in enumerate(spec.transforms)])
        return _poly_batch(spec.poly, Y)
    if isinstance(spec, Multiplicative):
        out = np.ones(len(X))
        for i, phi in enumerate(spec.transforms):
            out *= phi.batch(X[:, i])
        return out
    if isinstance(spec, GeometricMean):
        out = np.ones(len(X))
        for i, c in enumerate(spec.weights):
            if c != 0:
                out *= np.power(X[:, i], float(c))
        return out
    if isinstance(spec, BlackBox):
        if spec.vectorized:
            return np.asarray(spec.fn(X), dtype=float).reshape(len(X))
        return np.fromiter((float(spec.fn(list(row))) for row in X), dtype=float, count=len(X))
    out = np.zeros(len(X))
    for c, s in spec.terms:
        out += float(c) * evaluate_batch(s, X)
    return out


def _poly_batch(poly: MultilinearPoly, X: np.ndarray) -> np.ndarray:
    out = np.zeros(len(X))
    for S, c in poly.coeffs.items():
        idx = sb.members(S)
        out += float(c) * (X[:, idx].prod(axis=1) if idx else 1.0)
    return out


# ---------------------------------------------------------------------------
# Permutation


def check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise InvalidArgument(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute(spec: FunctionSpec, perm: Sequence[int]) -> FunctionSpec:
    """The spec of ``x -> f(x[perm[0]], ..., x[perm[n-1]])`` (0-based ``perm``).

    Variable ``i`` of ``f`` becomes variable ``perm[i]`` of the result, so
    a coefficient on ``S`` moves to ``perm(S)``.
    """
    n = spec.n
    perm = check_permutation(perm, n)
    if isinstance(spec, Multilinear):
        return Multilinear(_permute_poly(spec.poly, perm))
    if isinstance(spec, Choquet):
        return Choquet(SetFunction.from_dict(n, {sb.permute_mask(T, perm): a for T, a in spec.a.nonzero()}))
    if isinstance(spec, PseudoMultilinear):
        return PseudoMultilinear(_permute_poly(spec.poly, perm), _push(spec.transforms, perm))
    if isinstance(spec, Multiplicative):
        return Multiplicative(_push(spec.transforms, perm))
    if isinstance(spec, GeometricMean):
        return GeometricMean(_push(spec.weights, perm))
    if isinstance(spec, BlackBox):
        idx = list(perm)
        inner = spec.fn
        if spec.vectorized:
            fn = lambda X: inner(np.asarray(X)[:, idx])  # noqa: E731
        else:
            fn = lambda x: inner([x[j] for j in idx])  # noqa: E731
        support = None if spec.support is None else sb.permute_mask(spec.support, perm)
        return BlackBox(n, fn, spec.smooth, spec.vectorized, support, spec.lattice, spec.label)
    return LinearCombination(tuple((c, permute(s, perm)) for c, s in spec.terms))


def _permute_poly(poly: MultilinearPoly, perm) -> MultilinearPoly:
    return MultilinearPoly(poly.n, {sb.permute_mask(S, perm): c for S, c in poly.coeffs.items()})


def _push(items: Iterable, perm) -> tuple:
    items = tuple(items)
    out = [None] * len(items)
    for i, item in enumerate(items):
        out[perm[i]] = item
    return tuple(out)


# ---------------------------------------------------------------------------
# Results


CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class Estimate:
    """One index value with provenance. ``stderr`` is set iff the value is Monte Carlo."""

    value: Scalar
    method: str = CLOSED_FORM
    stderr: float | None = None
    biased: bool = False

    def __post_init__(self):
        if (self.stderr is not None) != (self.method == MONTE_CARLO):
            raise InvalidArgument("stderr must be present exactly for Monte Carlo estimates")


@dataclass(frozen=True)
class InteractionTable:
    n: int
    entries: Mapping[int, Estimate]

    def __getitem__(self, S: int) -> Estimate:
        return self.entries[S]

    def values(self) -> dict[int, Scalar]:
        return {S: e.value for S, e in self.entries.items()}

    def rows(self) -> list[tuple[int, Estimate]]:
        return sorted(self.entries.items(), key=lambda item: sb.sort_key(item[0]))
