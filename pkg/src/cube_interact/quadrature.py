"""Cubature rules on [0, 1]^d and the seeded Monte Carlo driver.

Random streams: block ``b`` of a run with seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence([s, b])))``. Blocks have a fixed
size, so the estimate does not depend on how many worker lanes process them.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import InvalidArgument

DEFAULT_ORDER = 8
BLOCK_SIZE = 1 << 14
THREADS_ENV = "CUBE_INTERACT_THREADS"


@lru_cache(maxsize=None)
def gauss_legendre_01(m: int) -> tuple[np.ndarray, np.ndarray]:
    """m-point Gauss-Legendre nodes and weights on [0, 1] (exact to degree 2m-1)."""
    if m < 1:
        raise InvalidArgument(f"quadrature order must be >= 1, got {m}")
    x, w = np.polynomial.legendre.leggauss(m)
    return (x + 1) / 2, w / 2


def tensor_rule(d: int, m: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product Gauss rule: points of shape (m^d, d) and weights summing to 1."""
    x, w = gauss_legendre_01(m)
    if d == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*([x] * d), indexing="ij")
    wgrids = np.meshgrid(*([w] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return pts, wts


@lru_cache(maxsize=32)
def _ordered_simplex_rule(d: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    # collapsed coordinates: y_j = u_j u_{j+1} ... u_d gives 0 <= y_1 <= ... <= y_d <= 1,
    # with Jacobian prod_j u_j^(j-1)
    u, w = tensor_rule(d, m)
    y = np.flip(np.cumprod(np.flip(u, axis=1), axis=1), axis=1)
    jac = np.prod(u ** np.arange(d), axis=1)
    return y, w * jac


def simplex_split_rule(d: int, m: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Rule on [0, 1]^d built from the d! order simplices.

    Exact for integrands that are polynomial on each simplex
    ``x_{s(1)} <= ... <= x_{s(d)}`` as long as the per-axis degree after the
    collapse (total degree + d - 1) stays below 2m.
    """
    if d == 0:
        return np.zeros((1, 0)), np.ones(1)
    y, w = _ordered_simplex_rule(d, m)
    pts, wts = [], []
    for order in permutations(range(d)):
        p = np.empty_like(y)
        p[:, list(order)] = y
        pts.append(p)
        wts.append(w)
    return np.concatenate(pts), np.concatenate(wts)


def lane_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InvalidArgument(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def monte_carlo(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    lanes: int | None = None,
) -> tuple[float, float]:
    """Sample mean and standard error of ``draw`` over ``samples`` draws.

    ``draw(rng, size)`` returns ``size`` i.i.d. samples of the integrand.
    """
    if samples < 2:
        raise InvalidArgument(f"Monte Carlo needs at least 2 samples for a standard error, got {samples}")
    if seed < 0:
        raise InvalidArgument("seed must be nonnegative")
    sizes = [BLOCK_SIZE] * (samples // BLOCK_SIZE)
    if samples % BLOCK_SIZE:
        sizes.append(samples % BLOCK_SIZE)

    def run(b: int) -> np.ndarray:
        return np.asarray(draw(block_rng(seed, b), sizes[b]), dtype=float)

    lanes = lane_count() if lanes is None else lanes
    if lanes > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=lanes) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    values = np.concatenate(parts)
    mean = float(values.mean())
    if np.all(values == values[0]):
        return float(values[0]), 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(samples))
