"""Games on {0,1}^n: Möbius/zeta transforms, Banzhaf interaction, discrete best-k fits.

A game is a :class:`~cube_interact.model.SetFunction` ``v`` with
``v(S) = f(1_S)``; ``v(∅)`` need not vanish.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from . import subsets as sb
from .errors import InvalidArgument
from .model import MultilinearPoly, SetFunction

Game = SetFunction

HALF = Fraction(1, 2)


def mobius(v: Game) -> SetFunction:
    """``a(S) = sum_{T ⊆ S} (-1)^{|S|-|T|} v(T)`` by the in-place subset-difference pass."""
    vals = list(v.values)
    for i in range(v.n):
        bit = 1 << i
        for S in range(len(vals)):
            if S & bit:
                vals[S] = vals[S] - vals[S ^ bit]
    return SetFunction(v.n, tuple(vals))


def zeta(a: SetFunction) -> Game:
    """``v(S) = sum_{T ⊆ S} a(T)``; inverse of :func:`mobius`."""
    vals = list(a.values)
    for i in range(a.n):
        bit = 1 << i
        for S in range(len(vals)):
            if S & bit:
                vals[S] = vals[S] + vals[S ^ bit]
    return SetFunction(a.n, tuple(vals))


def superset_transform(a: SetFunction, weight) -> SetFunction:
    """``b(S) = sum_{T ⊇ S} weight^{|T|-|S|} a(T)`` in O(n 2^n)."""
    vals = list(a.values)
    for i in range(a.n):
        bit = 1 << i
        for S in range(len(vals)):
            if not S & bit:
                vals[S] = vals[S] + weight * vals[S | bit]
    return SetFunction(a.n, tuple(vals))


def banzhaf_interaction(v: Game, S: int) -> Fraction:
    """``sum_{T ⊇ S} (1/2)^{|T|-|S|} a(T)`` with ``a = mobius(v)``."""
    sb.check_mask(S, v.n)
    a = mobius(v)
    s = sb.popcount(S)
    return sum((HALF ** (sb.popcount(T) - s) * a[T] for T in sb.supersets_of(S, v.n)), Fraction(0))


def banzhaf_table(v: Game) -> SetFunction:
    """Banzhaf interaction of every subset at once."""
    return superset_transform(mobius(v), HALF)


def discrete_derivative_average(v: Game, S: int) -> Fraction:
    """Average over all vertices of the discrete S-derivative of the pseudo-Boolean form.

    Brute force, O(2^n 2^|S|): it deliberately avoids the Möbius route.
    """
    sb.check_mask(S, v.n)
    s = sb.popcount(S)
    rest = sb.full_mask(v.n) & ~S
    total = Fraction(0)
    for base in sb.subsets_of(rest):
        # Δ^S f(x) depends only on the coordinates outside S
        delta = sum(((-1) ** (s - sb.popcount(T)) * v[base | T] for T in sb.subsets_of(S)), Fraction(0))
        total += delta
    # each base stands for the 2^|S| vertices that agree with it outside S
    return total * (1 << s) / (1 << v.n)


def best_k_approx_discrete(v: Game, k: int) -> MultilinearPoly:
    """Least-squares fit over the 2^n vertices by a multilinear polynomial of degree <= k."""
    n = v.n
    if not 0 <= k <= n:
        raise InvalidArgument(f"k must satisfy 0 <= k <= {n}, got {k}")
    a = mobius(v)
    coeffs = {}
    for S in sb.subsets_of_size_at_most(n, k):
        s = sb.popcount(S)
        corr = Fraction(0)
        for T in sb.supersets_of(S, n):
            t = sb.popcount(T)
            if t > k and a[T] != 0:
                corr += comb(t - s - 1, k - s) * HALF ** (t - s) * a[T]
        coeffs[S] = a[S] + (-1) ** (k - s) * corr
    return MultilinearPoly(n, coeffs)


def multilinear_extension(v: Game) -> MultilinearPoly:
    return MultilinearPoly.from_set_function(mobius(v))


def vertex_values(poly: MultilinearPoly) -> Game:
    """Restriction of a multilinear polynomial to {0,1}^n."""
    return zeta(poly.to_set_function())
