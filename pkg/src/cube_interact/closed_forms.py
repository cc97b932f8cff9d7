"""Exact interaction indexes for structured function classes.

Everything here is rational arithmetic when the inputs are rational; a float
input (e.g. an irrational power exponent given as a float) turns the affected
results into floats and nothing else changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from . import subsets as sb
from .errors import DegenerateError, InvalidArgument
from .model import (
    Affine,
    Identity,
    MultilinearPoly,
    Power,
    Scalar,
    SetFunction,
    Tabulated,
    UnaryTransform,
)


def beta_fn(p: int, q: int) -> Fraction:
    """B(p, q) = (p-1)! (q-1)! / (p+q-1)! for positive integers."""
    if p < 1 or q < 1:
        raise InvalidArgument(f"beta function needs p, q >= 1, got ({p}, {q})")
    return Fraction(factorial(p - 1) * factorial(q - 1), factorial(p + q - 1))


def min_moment(S: int, T: int) -> Fraction:
    """∫ min_{i∈T} x_i · prod_{i∈S} (x_i - 1/2) dx over the cube (empty min = 1)."""
    if S & ~T:
        return Fraction(0)
    s = sb.popcount(S)
    return Fraction(1, 2**s) * beta_fn(s + 1, sb.popcount(T) + 1)


def choquet_interaction(a: SetFunction, S: int) -> Fraction:
    """Index of ``x -> sum_T a(T) min_{i∈T} x_i`` on ``S``.

    ``S = ∅`` gives the mean ``sum_T a(T) / (|T| + 1)``.
    """
    sb.check_mask(S, a.n)
    s = sb.popcount(S)
    total = Fraction(0)
    for T, aT in a.nonzero():
        if T & S == S:
            total += aT * beta_fn(s + 1, sb.popcount(T) + 1)
    return 6**s * total


# ---------------------------------------------------------------------------
# Unary transforms


@dataclass(frozen=True)
class UnaryMoments:
    """``m0 = ∫φ``, ``m1 = 12 ∫φ(t)(t - 1/2) dt``, ``m2 = ∫φ²`` over [0, 1]."""

    m0: Scalar
    m1: Scalar
    m2: Scalar


def unary_moments(phi: UnaryTransform) -> UnaryMoments:
    if isinstance(phi, Identity):
        return UnaryMoments(Fraction(1, 2), Fraction(1), Fraction(1, 3))
    if isinstance(phi, Power):
        c = phi.exponent
        return UnaryMoments(1 / (c + 1), 6 * c / ((c + 1) * (c + 2)), 1 / (2 * c + 1))
    if isinstance(phi, Affine):
        p, q = phi.slope, phi.intercept
        return UnaryMoments(q + p / 2, p, q * q + p * q + p * p / 3)
    if isinstance(phi, Tabulated):
        m0 = m1 = m2 = Fraction(0)
        for a, b, ya, yb in phi.segments():
            slope = (yb - ya) / (b - a)
            alpha = ya - slope * a
            m0 += (b - a) * (ya + yb) / 2
            # ∫ (t - 1/2)(alpha + slope t) dt on [a, b]
            m1 += (
                slope * (b**3 - a**3) / 3
                + (alpha - slope / 2) * (b**2 - a**2) / 2
                - alpha * (b - a) / 2
            )
            m2 += (b - a) * (ya * ya + ya * yb + yb * yb) / 3
        return UnaryMoments(m0, 12 * m1, m2)
    raise InvalidArgument(f"unknown unary transform {phi!r}")


def pseudo_multilinear_interaction(g: MultilinearPoly, transforms, S: int) -> Scalar:
    """Index on ``S`` of ``x -> g(phi_1(x_1), ..., phi_n(x_n))``."""
    sb.check_mask(S, g.n)
    moms = [unary_moments(phi) for phi in transforms]
    total = Fraction(0)
    for T, aT in g.coeffs.items():
        if T & S != S:
            continue
        term = aT
        for i in sb.members(T):
            term = term * (moms[i].m1 if S >> i & 1 else moms[i].m0)
        total = total + term
    return total


def multiplicative_interaction(transforms, S: int) -> Scalar:
    """Index on ``S`` of ``x -> prod_i phi_i(x_i)``."""
    out = Fraction(1)
    for i, phi in enumerate(transforms):
        m = unary_moments(phi)
        out = out * (m.m1 if S >> i & 1 else m.m0)
    return out


def multiplicative_ratio(transforms, S: int) -> Scalar:
    """``I(f, S) / I(f, ∅) = prod_{i∈S} m1_i / m0_i`` for a product of unary factors."""
    out = Fraction(1)
    for i, phi in enumerate(transforms):
        m = unary_moments(phi)
        if m.m0 == 0:
            raise DegenerateError(f"factor {i + 1} has zero mean; use the absolute index instead")
        if S >> i & 1:
            out = out * m.m1 / m.m0
    return out


@dataclass(frozen=True)
class ProductForm:
    """``scale * prod_i (1 + slopes[i] * (x_i - 1/2))``."""

    scale: Scalar
    slopes: tuple

    def __call__(self, x) -> Scalar:
        out = self.scale
        for r, t in zip(self.slopes, x):
            out = out * (1 + r * (t - Fraction(1, 2)))
        return out

    def to_poly(self) -> MultilinearPoly:
        n = len(self.slopes)
        # each factor is (1 - r/2) + r x_i
        coeffs = {0: self.scale}
        for i, r in enumerate(self.slopes):
            c0, c1 = 1 - r / 2, r
            nxt = {}
            for S, c in coeffs.items():
                nxt[S] = nxt.get(S, 0) + c * c0
                nxt[S | 1 << i] = nxt.get(S | 1 << i, 0) + c * c1
            coeffs = nxt
        return MultilinearPoly(n, coeffs)


def multiplicative_best_approx(transforms) -> ProductForm:
    """Best multilinear approximation of full degree of a product of unary factors."""
    moms = [unary_moments(phi) for phi in transforms]
    scale = Fraction(1)
    for m in moms:
        scale = scale * m.m0
    slopes = []
    for i, m in enumerate(moms):
        if m.m0 == 0:
            raise DegenerateError(f"factor {i + 1} has zero mean")
        slopes.append(m.m1 / m.m0)
    return ProductForm(scale, tuple(slopes))


def geometric_mean_interaction(weights, S: int) -> Scalar:
    """``prod_{i∈N} 1/(c_i+1) · prod_{i∈S} 6 c_i/(c_i+2)`` for ``x -> prod x_i^{c_i}``."""
    out = Fraction(1)
    for i, c in enumerate(weights):
        out = out / (c + 1)
        if S >> i & 1:
            out = out * 6 * c / (c + 2)
    return out


# ---------------------------------------------------------------------------
# Second moments (used by the statistics module)


def choquet_second_moment_simplex(a: SetFunction) -> Fraction:
    """``∫ f²`` for a Lovász extension, integrating exactly over the n! order simplices.

    On the simplex where the coordinates are sorted by a permutation, ``f`` is a
    linear form in the order statistics of n uniforms, whose second moments are
    ``E[U_(i) U_(j)] = i (j+1) / ((n+1)(n+2))`` for ``i <= j``.
    """
    n = a.n
    terms = a.nonzero()
    mom = [[Fraction(1) for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(n + 1):
            lo, hi = min(i, j), max(i, j)
            if lo == 0:
                mom[i][j] = Fraction(hi, n + 1) if hi else Fraction(1)
            else:
                mom[i][j] = Fraction(lo * (hi + 1), (n + 1) * (n + 2))
    total = Fraction(0)
    for order in permutations(range(n)):
        rank = [0] * n
        for r, i in enumerate(order, start=1):
            rank[i] = r
        # coefficient attached to each order statistic (index 0 = constant)
        c = [Fraction(0)] * (n + 1)
        for T, aT in terms:
            r = min(rank[i] for i in sb.members(T)) if T else 0
            c[r] += aT
        nz = [r for r in range(n + 1) if c[r]]
        total += sum(c[i] * c[j] * mom[i][j] for i in nz for j in nz)
    return total / factorial(n)


def min_product_moment(T: int, U: int) -> Fraction:
    """``E[min_T X · min_U X]`` for independent uniforms (empty min = 1)."""
    al = sb.popcount(T & U)
    be = sb.popcount(T & ~U)
    ga = sb.popcount(U & ~T)
    tail = Fraction(1, al + be + ga + 2)
    return Fraction(1, be + 1) * (Fraction(1, ga + al + 1) - tail) + Fraction(1, ga + 1) * (
        Fraction(1, be + al + 1) - tail
    )


def choquet_second_moment_pairwise(a: SetFunction) -> Fraction:
    """``∫ f²`` for a Lovász extension via pairwise moments of minima."""
    terms = a.nonzero()
    return sum((aT * aU * min_product_moment(T, U) for T, aT in terms for U, aU in terms), Fraction(0))


def pseudo_multilinear_second_moment(g: MultilinearPoly, transforms) -> Scalar:
    moms = [unary_moments(phi) for phi in transforms]
    total = Fraction(0)
    items = list(g.coeffs.items())
    for T, aT in items:
        for U, aU in items:
            term = aT * aU
            for i in sb.members(T & U):
                term = term * moms[i].m2
            for i in sb.members(T ^ U):
                term = term * moms[i].m0
            total = total + term
    return total


def multiplicative_second_moment(transforms) -> Scalar:
    out = Fraction(1)
    for phi in transforms:
        out = out * unary_moments(phi).m2
    return out


def geometric_mean_second_moment(weights) -> Scalar:
    out = Fraction(1)
    for c in weights:
        out = out / (2 * c + 1)
    return out
