"""Shared test helpers: independent oracles and random-object generators.

The homology oracle here is a dense numpy row-reduction, deliberately a
different algorithm and data layout than the package's bitset elimination.
"""

from __future__ import annotations

import random

import numpy as np

from omegalab.bitset import bits, mask_of
from omegalab.boxcomplex import Z2Complex, make_complex
from omegalab.graphs import Graph
from omegalab.morse import MorseMatching


def betti_oracle(simplices) -> tuple[int, ...]:
    by_dim: dict[int, list[int]] = {}
    for s in simplices:
        by_dim.setdefault(s.bit_count() - 1, []).append(s)
    top = max(by_dim)
    levels = [sorted(by_dim.get(d, [])) for d in range(top + 1)]
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        rows = {s: i for i, s in enumerate(levels[d - 1])}
        mat = np.zeros((len(levels[d - 1]), len(levels[d])), dtype=np.uint8)
        for j, s in enumerate(levels[d]):
            for b in bits(s):
                mat[rows[s ^ (1 << b)], j] = 1
        ranks[d] = _rank_mod2(mat)
    out = [len(levels[d]) - ranks[d] - ranks[d + 1] for d in range(top + 1)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _rank_mod2(mat: np.ndarray) -> int:
    mat = mat.copy()
    rank = 0
    rows, cols = mat.shape
    pivot_row = 0
    for col in range(cols):
        hit = None
        for r in range(pivot_row, rows):
            if mat[r, col]:
                hit = r
                break
        if hit is None:
            continue
        mat[[pivot_row, hit]] = mat[[hit, pivot_row]]
        for r in range(rows):
            if r != pivot_row and mat[r, col]:
                mat[r] ^= mat[pivot_row]
        pivot_row += 1
        rank += 1
        if pivot_row == rows:
            break
    return rank


def component_count(simplices) -> int:
    vertices = set()
    edges = []
    for s in simplices:
        members = list(bits(s))
        vertices.update(members)
        if len(members) == 2:
            edges.append(members)
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in vertices})


def acyclic_oracle(matching: MorseMatching) -> bool:
    """Transitive-closure cycle detection, independent of the DFS checker."""
    partner = matching.partner()
    lowers = sorted(a for a, _ in matching.pairs)
    idx = {s: i for i, s in enumerate(lowers)}
    n = len(lowers)
    reach = [[False] * n for _ in range(n)]
    for s in lowers:
        up = partner[s]
        for b in bits(up):
            nxt = up ^ (1 << b)
            if nxt != s and nxt in idx:
                reach[idx[s]][idx[nxt]] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return not any(reach[i][i] for i in range(n))


def random_graph(rng: random.Random, n: int, edge_p: float, loop_p: float = 0.0) -> Graph:
    edges = []
    for u in range(n):
        if rng.random() < loop_p:
            edges.append((u, u))
        for v in range(u + 1, n):
            if rng.random() < edge_p:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def random_free_complex(rng: random.Random, max_shore: int = 10) -> Z2Complex:
    m = rng.randint(2, max_shore)
    facets = []
    for _ in range(rng.randint(1, 7)):
        size = rng.randint(1, min(5, m))
        chosen: list[int] = []
        forbidden: set[int] = set()
        pool = list(range(2 * m))
        rng.shuffle(pool)
        for t in pool:
            if t in forbidden:
                continue
            chosen.append(t)
            forbidden.add(t)
            forbidden.add(t + m if t < m else t - m)
            if len(chosen) == size:
                break
        facets.append(mask_of(chosen))
    return make_complex(tuple(range(m)), facets)


def random_collapse_matching(rng: random.Random, k: Z2Complex):
    """Random equivariant collapse; the recorded pairs are an acyclic
    matching whose unmatched remainder is the final subcomplex."""
    alive = set(k.simplices())
    tokens = k.token_count
    pairs = []
    while True:
        free = []
        for s in sorted(alive):
            cofaces = [
                s | (1 << t)
                for t in range(tokens)
                if not s >> t & 1 and (s | (1 << t)) in alive
            ]
            if len(cofaces) == 1:
                free.append((s, cofaces[0]))
        if not free or rng.random() < 0.15:
            break
        s, up = rng.choice(free)
        ms, mup = k.mirror(s), k.mirror(up)
        if len({s, up, ms, mup}) != 4:
            break
        pairs.append((s, up))
        pairs.append((ms, mup))
        alive -= {s, up, ms, mup}
    return MorseMatching(tuple(pairs)), alive


def random_equivariant_matching(rng: random.Random, k: Z2Complex) -> MorseMatching:
    """Greedy random matching with no acyclicity guarantee."""
    faces = k.simplices()
    incidences = []
    for s in sorted(faces):
        for t in range(k.token_count):
            if not s >> t & 1 and (s | (1 << t)) in faces:
                incidences.append((s, s | (1 << t)))
    rng.shuffle(incidences)
    matched: set[int] = set()
    pairs = []
    for s, up in incidences:
        ms, mup = k.mirror(s), k.mirror(up)
        quad = {s, up, ms, mup}
        if len(quad) != 4 or quad & matched:
            continue
        pairs.append((s, up))
        pairs.append((ms, mup))
        matched |= quad
    return MorseMatching(tuple(pairs))
