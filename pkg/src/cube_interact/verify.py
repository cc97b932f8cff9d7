"""Property suite run by ``cube-interact verify``.

Each property draws random inputs from a seeded generator, checks an
identity or an oracle comparison, and records every failing case with its
inputs, observed and expected values.
"""

from __future__ import annotations

import math
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import closed_forms as cf
from . import continuous as ct
from . import discrete as dc
from . import oracles
from . import stats
from . import subsets as sb
from .model import (
    Affine,
    BlackBox,
    Choquet,
    GeometricMean,
    Identity,
    LinearCombination,
    Multilinear,
    MultilinearPoly,
    Multiplicative,
    Power,
    PseudoMultilinear,
    SetFunction,
    Tabulated,
    constant,
    evaluate,
    permute,
)

QUICK, FULL = "quick", "full"


# ---------------------------------------------------------------------------
# Random inputs


def rand_rational(rng: random.Random, num: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_poly(rng: random.Random, n: int, density: float = 0.6, within: int | None = None) -> MultilinearPoly:
    """Random rational multilinear polynomial whose monomials lie inside ``within``."""
    within = sb.full_mask(n) if within is None else within
    coeffs = {S: rand_rational(rng) for S in sb.subsets_of(within) if rng.random() < density}
    return MultilinearPoly(n, coeffs)


def random_capacity(rng: random.Random, n: int, density: float = 0.5, within: int | None = None,
                    nonnegative: bool = False) -> SetFunction:
    within = sb.full_mask(n) if within is None else within
    entries = {}
    for T in sb.subsets_of(within):
        if rng.random() < density:
            c = rand_rational(rng)
            entries[T] = abs(c) if nonnegative else c
    return SetFunction.from_dict(n, entries)


def random_transform(rng: random.Random):
    pick = rng.randrange(4)
    if pick == 0:
        return Identity()
    if pick == 1:
        return Power(Fraction(rng.randint(0, 6), rng.randint(1, 3)))
    if pick == 2:
        return Affine(rand_rational(rng), rand_rational(rng))
    mid = Fraction(rng.randint(1, 5), 6)
    return Tabulated((Fraction(0), mid, Fraction(1)), tuple(rand_rational(rng) for _ in range(3)))


def random_weights(rng: random.Random, n: int) -> tuple:
    raw = [rng.randint(0, 4) for _ in range(n)]
    if sum(raw) == 0:
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return tuple(Fraction(r, total) for r in raw)


def _smooth_blackbox(n: int, seed: int) -> BlackBox:
    g = np.random.default_rng(seed)
    w = g.uniform(-1, 1, n)
    u = g.uniform(0.5, 1.5, n)

    def fn(X):
        X = np.asarray(X)
        return np.exp(X @ w) + np.prod(1 + u * X, axis=1) / 2

    return BlackBox(n, fn, smooth=True, vectorized=True, label="exp+product")


def random_spec(rng: random.Random, n: int, kinds=None):
    kinds = kinds or ("multilinear", "choquet", "pseudo", "multiplicative", "geometric", "blackbox")
    kind = rng.choice(kinds)
    if kind == "multilinear":
        return Multilinear(random_poly(rng, n))
    if kind == "choquet":
        return Choquet(random_capacity(rng, n))
    if kind == "pseudo":
        return PseudoMultilinear(random_poly(rng, n), tuple(random_transform(rng) for _ in range(n)))
    if kind == "multiplicative":
        return Multiplicative(tuple(random_transform(rng) for _ in range(n)))
    if kind == "geometric":
        return GeometricMean(random_weights(rng, n))
    return _smooth_blackbox(n, rng.randrange(1 << 30))


def arithmetic_mean(n: int) -> Multilinear:
    return Multilinear(MultilinearPoly(n, {1 << i: Fraction(1, n) for i in range(n)}))


def minimum(n: int) -> Choquet:
    return Choquet(SetFunction.from_dict(n, {sb.full_mask(n): 1}))


def symmetric_geometric_mean(n: int) -> GeometricMean:
    return GeometricMean((Fraction(1, n),) * n)


# ---------------------------------------------------------------------------
# Suite machinery


@dataclass
class Context:
    seed: int
    level: str
    rng: random.Random = field(init=False)
    cases: int = 0
    failures: list = field(default_factory=list)

    def __post_init__(self):
        self.rng = random.Random(self.seed)

    def size(self, quick: int, full: int) -> int:
        return full if self.level == FULL else quick

    def check(self, ok: bool, inputs: str, observed, expected) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(f"{inputs}: observed {observed}, expected {expected}")

    def close(self, observed, expected, tol: float, inputs: str) -> None:
        self.check(abs(float(observed) - float(expected)) <= tol, inputs, observed, expected)

    def equal(self, observed, expected, inputs: str) -> None:
        self.check(observed == expected, inputs, observed, expected)


@dataclass
class PropertyResult:
    name: str
    cases: int
    failures: list
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures


PROPERTIES: list[tuple[str, Callable[[Context], None], str]] = []


def prop(name: str, level: str = QUICK):
    def register(fn):
        PROPERTIES.append((name, fn, level))
        return fn

    return register


def run_suite(level: str = QUICK, seed: int = 1, only=None) -> list[PropertyResult]:
    results = []
    for offset, (name, fn, lvl) in enumerate(PROPERTIES):
        if lvl == FULL and level != FULL:
            continue
        if only is not None and name not in only:
            continue
        ctx = Context(seed * 1009 + offset, level)
        start = time.perf_counter()
        try:
            fn(ctx)
        except Exception as exc:  # a crash counts as a failure of that property
            ctx.failures.append(f"raised {type(exc).__name__}: {exc}")
        results.append(PropertyResult(name, ctx.cases, ctx.failures, time.perf_counter() - start))
    return results


def format_results(results: list[PropertyResult], max_failures: int = 5) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name}: {r.cases} cases, {len(r.failures)} failed ({r.seconds:.2f}s)")
        for msg in r.failures[:max_failures]:
            lines.append(f"    {msg}")
    ok = sum(r.passed for r in results)
    lines.append(f"{ok}/{len(results)} properties passed")
    return "\n".join(lines)


def _fmt(S: int) -> str:
    return sb.format_subset(S)


# ---------------------------------------------------------------------------
# Core model and discrete side


@prop("subset-enumeration")
def _subset_counts(ctx: Context) -> None:
    for n in range(1, 9):
        for k in range(n + 1):
            masks = list(sb.subsets_of_size_at_most(n, k))
            ctx.equal(len(set(masks)), sum(math.comb(n, s) for s in range(k + 1)), f"n={n} k={k}")


@prop("permutation-evaluation")
def _permute_eval(ctx: Context) -> None:
    for _ in range(ctx.size(30, 100)):
        n = ctx.rng.randint(1, 5)
        spec = random_spec(ctx.rng, n, ("multilinear", "choquet", "pseudo", "multiplicative", "geometric"))
        perm = list(range(n))
        ctx.rng.shuffle(perm)
        x = [Fraction(ctx.rng.randint(0, 8), 8) for _ in range(n)]
        lhs = evaluate(permute(spec, perm), x)
        rhs = evaluate(spec, [x[perm[i]] for i in range(n)])
        if isinstance(spec, GeometricMean):
            ctx.close(lhs, rhs, 1e-12, f"{type(spec).__name__} perm={perm} x={x}")
        else:
            ctx.equal(lhs, rhs, f"{type(spec).__name__} perm={perm} x={x}")


@prop("vertex-zeta")
def _vertex_zeta(ctx: Context) -> None:
    for _ in range(ctx.size(10, 40)):
        n = ctx.rng.randint(1, 6)
        a = random_capacity(ctx.rng, n)
        v = dc.zeta(a)
        for S in range(1 << n):
            x = [Fraction(S >> i & 1) for i in range(n)]
            ctx.equal(evaluate(Multilinear(MultilinearPoly.from_set_function(a)), x), v[S], f"multilinear S={_fmt(S)}")
            ctx.equal(evaluate(Choquet(a), x), v[S], f"choquet S={_fmt(S)}")


@prop("mobius-zeta-inverse")
def _mobius_zeta(ctx: Context) -> None:
    for _ in range(ctx.size(10, 40)):
        n = ctx.rng.randint(1, ctx.size(8, 12))
        v = random_capacity(ctx.rng, n, density=1.0)
        ctx.equal(dc.zeta(dc.mobius(v)), v, f"n={n}")
        ctx.equal(dc.mobius(dc.zeta(v)), v, f"n={n}")


@prop("banzhaf-vs-derivative-average")
def _banzhaf_avg(ctx: Context) -> None:
    for _ in range(ctx.size(5, 20)):
        n = ctx.rng.randint(1, ctx.size(6, 8))
        v = random_capacity(ctx.rng, n, density=1.0)
        table = dc.banzhaf_table(v)
        for S in range(1 << n):
            ctx.equal(dc.discrete_derivative_average(v, S), table[S], f"n={n} S={_fmt(S)}")
        S = ctx.rng.randrange(1 << n)
        ctx.equal(dc.banzhaf_interaction(v, S), table[S], f"single n={n} S={_fmt(S)}")


@prop("discrete-best-k-normal-equations")
def _discrete_lsq(ctx: Context) -> None:
    for _ in range(ctx.size(3, 8)):
        n = ctx.rng.randint(1, ctx.size(5, 6))
        v = random_capacity(ctx.rng, n, density=1.0)
        for k in range(n + 1):
            got = dc.best_k_approx_discrete(v, k)
            ctx.equal(got, oracles.discrete_least_squares(v, k), f"n={n} k={k}")
            table = dc.banzhaf_table(v)
            for S in sb.subsets_of_size_at_most(n, k):
                if sb.popcount(S) == k:
                    ctx.equal(got[S], table[S], f"top coefficient n={n} k={k} S={_fmt(S)}")


# ---------------------------------------------------------------------------
# Continuous index


@prop("orthonormality")
def _orthonormal(ctx: Context) -> None:
    for n in range(1, 5):
        for S in range(1 << n):
            for T in range(1 << n):
                ip = ct.basis_inner_product(S, T, n)
                ctx.close(ip, 1.0 if S == T else 0.0, 1e-12, f"n={n} S={_fmt(S)} T={_fmt(T)}")


@prop("banzhaf-equivalence")
def _banzhaf_equiv(ctx: Context) -> None:
    for _ in range(ctx.size(40, 200)):
        n = ctx.rng.randint(1, 8)
        poly = random_poly(ctx.rng, n, density=ctx.rng.uniform(0.2, 1.0))
        table = dc.banzhaf_table(dc.vertex_values(poly))
        spec = Multilinear(poly)
        for S in range(1 << n):
            ctx.equal(ct.interaction(spec, S).value, table[S], f"n={n} S={_fmt(S)}")


@prop("taylor-at-center")
def _taylor(ctx: Context) -> None:
    for _ in range(ctx.size(20, 60)):
        n = ctx.rng.randint(1, 6)
        poly = random_poly(ctx.rng, n)
        for S in range(1 << n):
            ctx.equal(ct.taylor_at_center(poly, S), ct.index_from_poly_coeffs(poly, S), f"n={n} S={_fmt(S)}")


@prop("linearity")
def _linearity(ctx: Context) -> None:
    for _ in range(ctx.size(20, 60)):
        n = ctx.rng.randint(1, 5)
        kinds = ("multilinear", "choquet", "pseudo", "multiplicative", "geometric")
        f, g = random_spec(ctx.rng, n, kinds), random_spec(ctx.rng, n, kinds)
        al, be = rand_rational(ctx.rng), rand_rational(ctx.rng)
        combo = LinearCombination(((al, f), (be, g)))
        for S in range(1 << n):
            lhs = ct.interaction(combo, S).value
            rhs = al * ct.interaction(f, S).value + be * ct.interaction(g, S).value
            ctx.equal(lhs, rhs, f"n={n} S={_fmt(S)}")


@prop("symmetry")
def _symmetry(ctx: Context) -> None:
    for _ in range(ctx.size(20, 60)):
        n = ctx.rng.randint(1, 5)
        spec = random_spec(ctx.rng, n, ("multilinear", "choquet", "pseudo", "multiplicative", "geometric"))
        perm = list(range(n))
        ctx.rng.shuffle(perm)
        moved = permute(spec, perm)
        for S in range(1 << n):
            ctx.equal(ct.interaction(moved, sb.permute_mask(S, perm)).value, ct.interaction(spec, S).value,
                      f"{type(spec).__name__} perm={perm} S={_fmt(S)}")


@prop("projection")
def _projection(ctx: Context) -> None:
    for _ in range(ctx.size(12, 50)):
        n = ctx.rng.randint(1, 5)
        spec = random_spec(ctx.rng, n)
        exact = not isinstance(spec, BlackBox)
        for k in range(n + 1):
            fk = Multilinear(ct.best_k_approx(spec, k))
            for S in sb.subsets_of_size_at_most(n, k):
                got, want = ct.interaction(fk, S).value, ct.interaction(spec, S).value
                label = f"{type(spec).__name__} n={n} k={k} S={_fmt(S)}"
                if exact:
                    ctx.equal(got, want, label)
                else:
                    ctx.close(got, want, 1e-10, label)


@prop("continuous-best-k-normal-equations")
def _continuous_lsq(ctx: Context) -> None:
    for _ in range(ctx.size(3, 6)):
        n = ctx.rng.randint(1, ctx.size(5, 6))
        poly = random_poly(ctx.rng, n)
        for k in range(n + 1):
            ctx.equal(ct.best_k_approx(Multilinear(poly), k), oracles.continuous_least_squares(poly, k), f"n={n} k={k}")
            v = dc.vertex_values(poly)
            ctx.equal(dc.best_k_approx_discrete(v, k), oracles.discrete_least_squares(v, k), f"discrete n={n} k={k}")


@prop("lemma-min-moment")
def _lemma_min(ctx: Context) -> None:
    for T in range(16):
        for S in range(16):
            ctx.close(ct.min_moment_quadrature(S, T), cf.min_moment(S, T), 1e-10, f"S={_fmt(S)} T={_fmt(T)}")
            if S & ~T:
                ctx.check(cf.min_moment(S, T) == 0, f"S={_fmt(S)} T={_fmt(T)}", cf.min_moment(S, T), 0)


def _dualisable(ctx: Context, n: int):
    if ctx.rng.random() < 0.5:
        return Multilinear(random_poly(ctx.rng, n))
    return Choquet(random_capacity(ctx.rng, n))


@prop("duality")
def _duality(ctx: Context) -> None:
    for _ in range(ctx.size(25, 100)):
        n = ctx.rng.randint(1, 5)
        f = _dualisable(ctx, n)
        fd = ct.dual(f)
        fs, fa = ct.self_dual_split(f)
        label = type(f).__name__
        ctx.equal(ct.interaction(fd, 0).value, 1 - ct.interaction(f, 0).value, f"{label} empty set")
        ctx.equal(ct.interaction(fs, 0).value, Fraction(1, 2), f"{label} self-dual mean")
        for S in range(1, 1 << n):
            s = sb.popcount(S)
            I = ct.interaction(f, S).value
            ctx.equal(ct.interaction(fd, S).value, (-1) ** (s + 1) * I, f"{label} n={n} S={_fmt(S)}")
            if s % 2 == 0:
                ctx.equal(ct.interaction(fs, S).value, 0, f"{label} self-dual even S={_fmt(S)}")
                ctx.equal(ct.interaction(fa, S).value, I, f"{label} anti-self-dual part S={_fmt(S)}")
            else:
                ctx.equal(ct.interaction(fs, S).value, I, f"{label} self-dual part S={_fmt(S)}")


@prop("ineffective-variables")
def _ineffective(ctx: Context) -> None:
    for _ in range(ctx.size(20, 60)):
        n = ctx.rng.randint(2, 6)
        i = ctx.rng.randrange(n)
        within = sb.full_mask(n) & ~(1 << i)
        kind = ctx.rng.randrange(4)
        if kind == 0:
            spec = Multilinear(random_poly(ctx.rng, n, within=within))
        elif kind == 1:
            spec = Choquet(random_capacity(ctx.rng, n, within=within))
        elif kind == 2:
            spec = PseudoMultilinear(random_poly(ctx.rng, n, within=within), tuple(random_transform(ctx.rng) for _ in range(n)))
        else:
            w = list(random_weights(ctx.rng, n - 1))
            w.insert(i, Fraction(0))
            spec = GeometricMean(tuple(w))
        for S in sb.supersets_of(1 << i, n):
            ctx.equal(ct.interaction(spec, S).value, 0, f"{type(spec).__name__} ineffective x{i + 1} S={_fmt(S)}")


@prop("dummy-partition")
def _dummy(ctx: Context) -> None:
    for _ in range(ctx.size(15, 50)):
        n = ctx.rng.randint(2, 6)
        A = ctx.rng.randrange(1, (1 << n) - 1)
        B = sb.full_mask(n) & ~A
        fA = Choquet(random_capacity(ctx.rng, n, within=A))
        fB = PseudoMultilinear(random_poly(ctx.rng, n, within=B), tuple(random_transform(ctx.rng) for _ in range(n)))
        f = LinearCombination(((Fraction(1), fA), (Fraction(1), fB)))
        for K in range(1 << n):
            if K & A and K & B:
                ctx.equal(ct.interaction(f, K).value, 0, f"n={n} A={_fmt(A)} K={_fmt(K)}")


@prop("k-additivity")
def _k_additive(ctx: Context) -> None:
    for _ in range(ctx.size(15, 50)):
        n = ctx.rng.randint(2, 6)
        k = ctx.rng.randint(1, n - 1)
        parts = {}
        for R in sb.subsets_of_size_at_most(n, k):
            if ctx.rng.random() < 0.5:
                continue
            if ctx.rng.random() < 0.5:
                parts[R] = Choquet(random_capacity(ctx.rng, n, within=R))
            else:
                parts[R] = Multilinear(random_poly(ctx.rng, n, within=R))
        if not parts:
            parts[0] = constant(n, 1)
        f = LinearCombination(tuple((Fraction(1), s) for s in parts.values()))
        for S in range(1 << n):
            s = sb.popcount(S)
            if s > k:
                ctx.equal(ct.interaction(f, S).value, 0, f"n={n} k={k} S={_fmt(S)}")
            elif s == k:
                want = ct.interaction(parts[S], S).value if S in parts else 0
                ctx.equal(ct.interaction(f, S).value, want, f"n={n} k={k} S={_fmt(S)}")


@prop("s-increasing")
def _s_increasing(ctx: Context) -> None:
    g = np.random.default_rng(ctx.seed)
    for _ in range(ctx.size(10, 40)):
        n = ctx.rng.randint(1, 5)
        if ctx.rng.random() < 0.5:
            spec = Choquet(random_capacity(ctx.rng, n, nonnegative=True))
        else:
            spec = Multiplicative(tuple(
                ctx.rng.choice([Identity(), Power(Fraction(ctx.rng.randint(1, 5), 2)), Affine(Fraction(ctx.rng.randint(0, 3)), Fraction(ctx.rng.randint(0, 3)))])
                for _ in range(n)))
        S = ctx.rng.randrange(1, 1 << n)
        X = g.random((200, n))
        Y = X + (1 - X) * g.random((200, n))
        diffs = ct._box_difference(spec, S, X, Y)
        ctx.check(bool(np.all(diffs >= -1e-12)), f"{type(spec).__name__} S={_fmt(S)} box corners", diffs.min(), ">= 0")
        ctx.check(ct.interaction(spec, S).value >= 0, f"{type(spec).__name__} S={_fmt(S)}", ct.interaction(spec, S).value, ">= 0")


@prop("closed-form-cross-checks")
def _closed_cross(ctx: Context) -> None:
    for _ in range(ctx.size(15, 50)):
        n = ctx.rng.randint(1, 5)
        poly = random_poly(ctx.rng, n)
        pm = PseudoMultilinear(poly, (Identity(),) * n)
        w = random_weights(ctx.rng, n)
        geo_as_pm = PseudoMultilinear(MultilinearPoly(n, {sb.full_mask(n): 1}), tuple(Power(c) for c in w))
        for S in range(1 << n):
            ctx.equal(ct.interaction(pm, S).value, ct.index_from_poly_coeffs(poly, S), f"identity transforms S={_fmt(S)}")
            ctx.equal(cf.geometric_mean_interaction(w, S), ct.interaction(geo_as_pm, S).value, f"w={w} S={_fmt(S)}")


# ---------------------------------------------------------------------------
# Statistics


@prop("r-squared-consistency")
def _r2(ctx: Context) -> None:
    x1x2 = Multilinear(MultilinearPoly(2, {3: 1}))
    ctx.equal(stats.r_squared(x1x2, 1), Fraction(6, 7), "x1*x2 k=1")
    for _ in range(ctx.size(10, 40)):
        n = ctx.rng.randint(1, 5)
        spec = random_spec(ctx.rng, n, ("multilinear", "choquet", "pseudo", "geometric"))
        m = stats.moments(spec)
        if m.variance == 0:
            continue
        for k in range(n + 1):
            fk = ct.best_k_approx(spec, k)
            ratio = (ct.poly_inner_product(fk, fk) - m.mean**2) / m.variance
            ctx.close(stats.r_squared(spec, k), ratio, 1e-10, f"{type(spec).__name__} n={n} k={k}")
            ctx.equal(ct.interaction(Multilinear(fk), 0).value, m.mean, f"mean preserved k={k}")
        if isinstance(spec, Multilinear):
            ctx.equal(stats.r_squared(spec, n), 1, f"full degree n={n}")


@prop("scale-invariance")
def _scale(ctx: Context) -> None:
    for _ in range(ctx.size(15, 40)):
        n = ctx.rng.randint(1, 4)
        spec = random_spec(ctx.rng, n, ("multilinear", "choquet"))
        if stats.moments(spec).variance == 0:
            continue
        a = Fraction(ctx.rng.randint(1, 9), ctx.rng.randint(1, 4))
        b = rand_rational(ctx.rng)
        moved = LinearCombination(((a, spec), (b, constant(n, 1))))
        for S in range(1, 1 << n):
            ctx.close(stats.normalized_index(moved, S), stats.normalized_index(spec, S), 1e-12, f"a={a} b={b} S={_fmt(S)}")
            r = stats.normalized_index(spec, S)
            ctx.check(-1 - 1e-12 <= r <= 1 + 1e-12, f"S={_fmt(S)}", r, "in [-1, 1]")


@prop("reported-values")
def _reported(ctx: Context) -> None:
    for n in range(2, 11):
        r_arith = stats.normalized_index(arithmetic_mean(n), 1)
        r_geo = stats.normalized_index(symmetric_geometric_mean(n), 1)
        ctx.close(r_arith, 1 / math.sqrt(n), 1e-12, f"arithmetic mean n={n}")
        geo = math.sqrt(3) / (2 * n + 1) * (((n + 1) ** 2 / (n * (n + 2))) ** n - 1) ** -0.5
        ctx.close(r_geo, geo, 1e-10, f"geometric mean n={n}")
        ctx.check(r_arith > r_geo, f"ordering arith > geo n={n}", r_geo, f"< {r_arith}")
        if n <= 6:
            mn = minimum(n)
            sigma = math.sqrt(n) / ((n + 1) * math.sqrt(n + 2))
            ctx.close(stats.moments(mn).sigma, sigma, 1e-12, f"sigma(min) n={n}")
            r_min = stats.normalized_index(mn, 1)
            ctx.close(r_min, math.sqrt(3) / math.sqrt(n * (n + 2)), 1e-10, f"min n={n}")
            ctx.close(stats.normalized_index(ct.dual(mn), 1), r_min, 1e-10, f"max n={n}")
            ctx.check(r_arith > r_min, f"ordering arith > min n={n}", r_min, f"< {r_arith}")


@prop("second-moment-routes")
def _second_moment(ctx: Context) -> None:
    for _ in range(ctx.size(10, 30)):
        n = ctx.rng.randint(1, 5)
        a = random_capacity(ctx.rng, n)
        ctx.equal(cf.choquet_second_moment_simplex(a), cf.choquet_second_moment_pairwise(a), f"n={n}")


# ---------------------------------------------------------------------------
# Monte Carlo (full level only)

ESTIMATOR_CASES = [
    ("min n=2", minimum(2), [0b1, 0b11]),
    ("min n=3", minimum(3), [0b1, 0b11, 0b111]),
    ("x1*x2", Multilinear(MultilinearPoly(2, {3: 1})), [0b1, 0b11]),
]


@prop("estimator-agreement", FULL)
def _estimators(ctx: Context) -> None:
    seeds = range(ctx.seed, ctx.seed + 10)
    for label, spec, masks in ESTIMATOR_CASES:
        for S in masks:
            exact = float(ct.interaction(spec, S).value)
            for kind in ct.EstimatorKind:
                if kind is ct.EstimatorKind.BETA and isinstance(spec, Choquet):
                    continue  # min has no continuous mixed partials
                hits = 0
                for seed in seeds:
                    est = ct.estimate(spec, S, kind, 100_000, seed)
                    hits += abs(est.value - exact) <= 4 * est.stderr + 1e-12
                ctx.check(hits >= 9, f"{label} S={_fmt(S)} {kind.value}", f"{hits}/10 within 4 stderr", ">= 9/10")


@prop("box-normaliser", FULL)
def _mu(ctx: Context) -> None:
    for s in (1, 2, 3):
        S = (1 << s) - 1
        est = ct.box_volume_normaliser(S, 3, 100_000, ctx.seed)
        ctx.check(abs(est.value - 6.0**-s) <= 4 * est.stderr, f"|S|={s}", f"{est.value} ± {est.stderr}", 6.0**-s)


@prop("choquet-vs-box", FULL)
def _choquet_mc(ctx: Context) -> None:
    for j in range(10):
        n = ctx.rng.randint(1, 5)
        spec = Choquet(random_capacity(ctx.rng, n))
        S = ctx.rng.randrange(1, 1 << n)
        est = ct.estimate(spec, S, ct.EstimatorKind.BOX, 100_000, ctx.seed + j)
        exact = float(ct.interaction(spec, S).value)
        ctx.check(abs(est.value - exact) <= 4 * est.stderr + 1e-12, f"n={n} S={_fmt(S)}", f"{est.value} ± {est.stderr}", exact)
