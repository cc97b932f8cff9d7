"""Independent reference computations used by the verification suite and the tests.

These deliberately avoid the transforms and closed forms they are compared
against: least-squares fits are solved from dense normal equations.
"""

from __future__ import annotations

from fractions import Fraction

from . import subsets as sb
from .model import MultilinearPoly, SetFunction


def solve_rational(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact Gauss-Jordan solve of a nonsingular square system."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def discrete_least_squares(v: SetFunction, k: int) -> MultilinearPoly:
    """Fit over the 2^n vertices by a degree-<=k multilinear polynomial (normal equations)."""
    n = v.n
    basis = list(sb.subsets_of_size_at_most(n, k))
    # sum_x v_S(x) v_T(x) counts the vertices containing S ∪ T
    A = [[Fraction(1 << (n - sb.popcount(S | T))) for T in basis] for S in basis]
    b = [sum((v[x] for x in sb.supersets_of(S, n)), Fraction(0)) for S in basis]
    return MultilinearPoly(n, dict(zip(basis, solve_rational(A, b))))


def _gram(S: int, T: int) -> Fraction:
    # ∫ v_S v_T = (1/2)^{|S Δ T|} (1/3)^{|S ∩ T|}
    return Fraction(1, 2 ** sb.popcount(S ^ T) * 3 ** sb.popcount(S & T))


def continuous_least_squares(poly: MultilinearPoly, k: int) -> MultilinearPoly:
    """L² projection of a multilinear polynomial onto degree <= k (normal equations)."""
    n = poly.n
    basis = list(sb.subsets_of_size_at_most(n, k))
    A = [[_gram(S, T) for T in basis] for S in basis]
    b = [sum((c * _gram(S, U) for U, c in poly.coeffs.items()), Fraction(0)) for S in basis]
    return MultilinearPoly(n, dict(zip(basis, solve_rational(A, b))))
