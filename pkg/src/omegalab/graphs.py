"""Loop-allowing undirected graphs over dense integer vertex ids.

Adjacency is stored as one int bitmask per vertex, which keeps the set
primitives (common neighborhood, join tests) word-parallel; those two
primitives dominate the cost of every functor construction downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitset import bits
from .errors import ParameterError, ParseError


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph; vertices are 0..n-1, loops allowed.

    ``adj[v]`` is the neighbor bitmask of ``v`` (bit v set iff there is a
    loop at v).  ``labels``, when present, are unique per vertex and are
    carried through file round-trips.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ParameterError("adjacency length does not match vertex count")
        full = self.vertex_mask()
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ParameterError(f"adjacency row {v} has bits beyond n-1")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ParameterError(f"adjacency not symmetric at ({u}, {v})")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ParameterError("labels must be total")
            if len(set(self.labels)) != self.n:
                raise ParameterError("labels must be unique")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> int:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def has_loops(self) -> bool:
        return any(row >> v & 1 for v, row in enumerate(self.adj))

    def edges(self) -> list[tuple[int, int]]:
        """Edge list with u <= v, sorted; loops appear once as (v, v)."""
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row):
                if v >= u:
                    out.append((u, v))
        return out

    def edge_count(self) -> int:
        return len(self.edges())

    def label_of(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def with_labels(self, labels) -> "Graph":
        return Graph(self.n, self.adj, tuple(labels))


def same_adjacency(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.adj == h.adj


# -- named families ----------------------------------------------------------

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def biclique(n: int, m: int) -> Graph:
    return Graph.from_edges(n + m, [(i, n + j) for i in range(n) for j in range(m)])


def circular_clique(p: int, q: int) -> Graph:
    if p < 2 * q:
        raise ParameterError(f"circular clique needs p/q >= 2, got {p}/{q}")
    edges = [(i, (i + j) % p) for i in range(p) for j in range(q, p - q + 1)]
    return Graph.from_edges(p, edges)


def petersen() -> Graph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i--i+5."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, edges)


_FAMILIES = {
    "path": (path_graph, 1),
    "cycle": (cycle_graph, 1),
    "clique": (clique, 1),
    "biclique": (biclique, 2),
    "circular_clique": (circular_clique, 2),
}


def make_family(kind: str, *params: int) -> Graph:
    if kind not in _FAMILIES:
        raise ParameterError(f"unknown family {kind!r}")
    builder, arity = _FAMILIES[kind]
    if len(params) != arity:
        raise ParameterError(f"family {kind!r} takes {arity} parameter(s)")
    if any(p <= 0 for p in params):
        raise ParameterError(f"family parameters must be positive, got {params}")
    return builder(*params)


# -- set primitives ----------------------------------------------------------

def common_neighborhood(g: Graph, a_mask: int) -> int:
    """Intersection of the neighborhoods of all vertices in ``a_mask``.

    The empty set has common neighborhood V(G).
    """
    out = g.vertex_mask()
    for v in bits(a_mask):
        out &= g.adj[v]
        if not out:
            break
    return out


def is_joined(g: Graph, a_mask: int, b_mask: int) -> bool:
    """True iff every vertex of A is adjacent to every vertex of B."""
    for v in bits(a_mask):
        if b_mask & ~g.adj[v]:
            return False
    return True


def tensor_product(g: Graph, h: Graph) -> Graph:
    """Categorical product; vertex (u, w) gets row-major index u*h.n + w."""
    hn = h.n
    rows = []
    for u in range(g.n):
        for w in range(h.n):
            row = 0
            for u2 in bits(g.adj[u]):
                row |= h.adj[w] << (u2 * hn)
            rows.append(row)
    return Graph(g.n * hn, tuple(rows))


def is_square_free(g: Graph) -> bool:
    """No fully joined pair of 2-sets.

    Equivalent to: no C4 subgraph, no two adjacent loops, and no triangle
    with a looped vertex; the single test |N(u) & N(v)| <= 1 over vertex
    pairs covers all three shapes.
    """
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if (g.adj[u] & g.adj[v]).bit_count() > 1:
                return False
    return True


def min_odd_closed_walk(g: Graph) -> int | None:
    """Length of the shortest odd closed walk, or None when bipartite.

    Parity BFS on the double cover: distances to (v, odd) from (v, even).
    A loop gives 1.
    """
    best = None
    for start in range(g.n):
        dist_even = [-1] * g.n
        dist_odd = [-1] * g.n
        dist_even[start] = 0
        frontier = [(start, 0)]
        d = 0
        while frontier:
            d += 1
            if best is not None and d >= best:
                break
            nxt = []
            for v, parity in frontier:
                row = g.adj[v]
                tgt = dist_odd if parity == 0 else dist_even
                for u in bits(row):
                    if tgt[u] < 0:
                        tgt[u] = d
                        nxt.append((u, 1 - parity))
            frontier = nxt
            if dist_odd[start] >= 0:
                break
        if dist_odd[start] >= 0 and (best is None or dist_odd[start] < best):
            best = dist_odd[start]
    return best


def max_degree(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(row.bit_count() for row in g.adj)


# -- brute-force isomorphism (test-scale only, n <= 16) ----------------------

def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False
    if sorted(map(g.degree, range(g.n))) != sorted(map(h.degree, range(h.n))):
        return False

    deg_h = [h.degree(v) for v in range(h.n)]
    image = [-1] * g.n
    used = [False] * h.n

    def place(v: int) -> bool:
        if v == g.n:
            return True
        dv = g.degree(v)
        for w in range(h.n):
            if used[w] or deg_h[w] != dv:
                continue
            ok = True
            for u in range(v):
                if g.has_edge(u, v) != h.has_edge(image[u], w):
                    ok = False
                    break
            if ok and g.has_edge(v, v) == h.has_edge(w, w):
                image[v] = w
                used[w] = True
                if place(v + 1):
                    return True
                used[w] = False
                image[v] = -1
        return False

    return place(0)


# -- text format --------------------------------------------------------------
#
#   p <n> <m>
#   e <u> <v>        (m lines, written with u <= v, sorted)
#   l <v> <label>    (only when the graph carries labels; label may contain
#                     spaces and runs to end of line)

def format_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.edge_count()}"]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    if g.labels is not None:
        lines += [f"l {v} {g.labels[v]}" for v in range(g.n)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        kind = line.split(maxsplit=1)[0]
        if kind == "p":
            if n is not None:
                raise ParseError("duplicate p line", lineno)
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("p line must be 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("p line fields must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("p line fields must be nonnegative", lineno)
        elif kind == "e":
            if n is None:
                raise ParseError("e line before p line", lineno)
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("e line must be 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("e line fields must be integers", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({u}, {v}) out of range", lineno)
            edges.append((u, v))
        elif kind == "l":
            if n is None:
                raise ParseError("l line before p line", lineno)
            parts = line.split(maxsplit=2)
            if len(parts) != 3:
                raise ParseError("l line must be 'l <v> <label>'", lineno)
            try:
                v = int(parts[1])
            except ValueError:
                raise ParseError("l line vertex must be an integer", lineno) from None
            if not 0 <= v < n:
                raise ParseError(f"label vertex {v} out of range", lineno)
            if v in labels:
                raise ParseError(f"duplicate label for vertex {v}", lineno)
            labels[v] = parts[2]
        else:
            raise ParseError(f"unknown line kind {kind!r}", lineno)
    if n is None:
        raise ParseError("missing p line")
    if m is not None and len(edges) != m:
        raise ParseError(f"p line announced {m} edges, found {len(edges)}")
    label_tuple = None
    if labels:
        if len(labels) != n:
            raise ParseError("labels must be total when present")
        label_tuple = tuple(labels[v] for v in range(n))
    return Graph.from_edges(n, edges, label_tuple)
