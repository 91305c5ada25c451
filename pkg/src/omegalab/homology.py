"""Mod-2 simplicial homology via Gaussian elimination on bitset columns.

This is the machine-checkable shadow of every homotopy-equivalence claim in
the package: equal Betti vectors are a necessary condition, cheap enough to
assert on every collapse certificate.
"""

from __future__ import annotations

from collections.abc import Iterable

from .bitset import bits
from .errors import ResourceError

DEFAULT_SIMPLEX_BUDGET = 10**7


def _by_dimension(simplices: Iterable[int]) -> list[list[int]]:
    """Bucket simplex masks by dimension; each bucket sorted by the vertex
    id tuple so boundary columns come out in a deterministic order."""
    buckets: dict[int, list[int]] = {}
    for s in simplices:
        buckets.setdefault(s.bit_count() - 1, []).append(s)
    if not buckets:
        return []
    out = [[] for _ in range(max(buckets) + 1)]
    for d, items in buckets.items():
        items.sort(key=lambda m: tuple(bits(m)))
        out[d] = items
    return out


def gf2_rank(columns: list[int]) -> int:
    """Rank of a GF(2) matrix given as column bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = col
                rank += 1
                break
            col ^= pivot
    return rank


def boundary_columns(lower: list[int], upper: list[int]) -> list[int]:
    """Boundary matrix of the d-simplices in ``upper`` over the (d-1)-rows
    in ``lower``, one int column per d-simplex."""
    row_of = {s: i for i, s in enumerate(lower)}
    cols = []
    for s in upper:
        col = 0
        m = s
        while m:
            low = m & -m
            m ^= low
            col |= 1 << row_of[s ^ low]
        cols.append(col)
    return cols


def betti_mod2(simplices: Iterable[int], budget: int = DEFAULT_SIMPLEX_BUDGET) -> tuple[int, ...]:
    """Unreduced mod-2 Betti numbers of a simplex set (masks, all faces present)."""
    levels = _by_dimension(simplices)
    if not levels:
        return ()
    total = sum(len(level) for level in levels)
    if total > budget:
        raise ResourceError(f"homology budget {budget} exceeded ({total} simplices)")
    ranks = [0] * (len(levels) + 1)  # ranks[d] = rank of boundary_d
    for d in range(1, len(levels)):
        ranks[d] = gf2_rank(boundary_columns(levels[d - 1], levels[d]))
    out = [len(levels[d]) - ranks[d] - ranks[d + 1] for d in range(len(levels))]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def euler_characteristic(simplices: Iterable[int]) -> int:
    chi = 0
    for s in simplices:
        chi += 1 if (s.bit_count() - 1) % 2 == 0 else -1
    return chi


def betti_of_complex(k, budget: int = DEFAULT_SIMPLEX_BUDGET) -> tuple[int, ...]:
    """Betti vector of a facet-presented complex (materializes all faces)."""
    return betti_mod2(k.simplices(budget), budget)


def euler_of_complex(k, budget: int = DEFAULT_SIMPLEX_BUDGET) -> int:
    return euler_characteristic(k.simplices(budget))


def convolve(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Degree-wise convolution; the product-space Betti vector over a field."""
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)
