"""Subsets of N = {1, ..., n} as integer bit masks.

Variable ``i`` (1-based, as in the printed output) lives in bit ``i - 1``.
Inside the library every subset is a plain ``int``; these helpers convert
to and from index lists and the ``{1,3}`` display form.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from itertools import combinations

from .errors import InvalidArgument

MAX_N = 63
MAX_DENSE_N = 24


def check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise InvalidArgument(f"ground-set size must be in 1..{MAX_N}, got {n}")


def check_mask(S: int, n: int) -> None:
    if S < 0 or S >> n:
        raise InvalidArgument(f"subset mask {S:#x} has bits outside 0..{n - 1}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(S: int) -> int:
    return bin(S).count("1")


def mask_of(indices: Iterable[int]) -> int:
    """Mask from 0-based variable indices."""
    S = 0
    for i in indices:
        if i < 0:
            raise InvalidArgument(f"negative variable index {i}")
        S |= 1 << i
    return S


def members(S: int) -> list[int]:
    """0-based indices of the bits set in ``S``, ascending."""
    out = []
    i = 0
    while S:
        if S & 1:
            out.append(i)
        S >>= 1
        i += 1
    return out


def subsets_of(S: int) -> Iterator[int]:
    """All T with T ⊆ S (including S and 0)."""
    T = S
    while True:
        yield T
        if T == 0:
            return
        T = (T - 1) & S


def supersets_of(S: int, n: int) -> Iterator[int]:
    """All T with S ⊆ T ⊆ N."""
    comp = full_mask(n) & ~S
    for extra in subsets_of(comp):
        yield S | extra


def subsets_of_size_at_most(n: int, k: int) -> Iterator[int]:
    """Masks of every subset with at most ``k`` elements, by size then lexicographically."""
    check_n(n)
    if not 0 <= k <= n:
        raise InvalidArgument(f"k must satisfy 0 <= k <= n={n}, got {k}")
    for size in range(k + 1):
        for combo in combinations(range(n), size):
            yield mask_of(combo)


def sort_key(S: int) -> tuple[int, list[int]]:
    """Order by cardinality, then lexicographically on the sorted members."""
    return popcount(S), members(S)


def format_subset(S: int) -> str:
    return "{" + ",".join(str(i + 1) for i in members(S)) + "}"


def parse_subset(text: str, n: int) -> int:
    """Parse ``{1,3}`` / ``1,3`` / ``{}`` (1-based) into a mask."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return 0
    S = 0
    for part in body.split(","):
        try:
            i = int(part)
        except ValueError:
            raise InvalidArgument(f"bad subset element {part!r} in {text!r}") from None
        if not 1 <= i <= n:
            raise InvalidArgument(f"subset element {i} outside 1..{n}")
        S |= 1 << (i - 1)
    return S


def permute_mask(S: int, perm: tuple[int, ...]) -> int:
    """Image of ``S`` under the 0-based permutation ``perm`` (i -> perm[i])."""
    out = 0
    for i in members(S):
        out |= 1 << perm[i]
    return out
