"""The three odd-index graph functors and the explicit witness constructions.

``subdivide`` replaces every edge by a path of k edges, ``walk_power``
joins vertices connected by a walk of length exactly k, and ``omega`` is
the right adjoint to ``walk_power``: its vertices are tuples of nested
neighborhood sets.  All three take the odd index k as their parameter.

Tuple components are stored as int bitmasks over the base graph.  A tuple
(A_0, ..., A_l) requires A_0 to be a singleton, every component nonempty,
and consecutive components fully joined.  Tuples with an empty component
would be isolated and are not enumerated (see the package decisions log).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitset import bits, submasks
from .errors import ContractError, ParameterError, PreconditionError, ResourceError
from .graphs import Graph, common_neighborhood, is_joined

DEFAULT_VERTEX_BUDGET = 10**6

OmegaTuple = tuple[int, ...]


@dataclass(frozen=True)
class Homomorphism:
    """Edge-preserving vertex map, validated on construction."""

    source: Graph
    target: Graph
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.n:
            raise ContractError("mapping must be total on the source")
        for u in range(self.source.n):
            fu = self.mapping[u]
            if not 0 <= fu < self.target.n:
                raise ContractError(f"image of {u} out of range")
            for v in bits(self.source.adj[u]):
                if v < u:
                    continue
                if not self.target.has_edge(fu, self.mapping[v]):
                    raise ContractError(
                        f"edge ({u}, {v}) maps to non-edge ({fu}, {self.mapping[v]})"
                    )

    @classmethod
    def identity(cls, g: Graph) -> "Homomorphism":
        return cls(g, g, tuple(range(g.n)))

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """self o first (apply ``first``, then ``self``)."""
        if first.target.adj != self.source.adj:
            raise ContractError("composition mismatch: inner target != outer source")
        return Homomorphism(
            first.source, self.target, tuple(self.mapping[x] for x in first.mapping)
        )

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)


@dataclass(frozen=True)
class FunctorResult:
    """A constructed graph plus the provenance needed to invert the construction.

    For omega-style results, ``tuples[i]`` is the component tuple behind
    vertex i and ``tuple_index`` inverts it.  For subdivisions, ``origins[i]``
    is ("v", v) for an original vertex and ("e", u, v, pos) for the pos-th
    interior vertex of the path replacing edge (u, v), u <= v.
    """

    graph: Graph
    functor: str
    k: int
    base: Graph
    tuples: tuple[OmegaTuple, ...] | None = None
    tuple_index: dict[OmegaTuple, int] | None = None
    origins: tuple[tuple, ...] | None = None

    def index_of(self, tup: OmegaTuple) -> int:
        if self.tuple_index is None:
            raise ContractError(f"{self.functor} result carries no tuple index")
        return self.tuple_index[tup]


def _require_odd(k: int, minimum: int = 1) -> None:
    if k % 2 == 0:
        raise ParameterError(f"functor index must be odd, got {k}")
    if k < minimum:
        raise ParameterError(f"functor index must be >= {minimum}, got {k}")


# -- subdivision --------------------------------------------------------------

def subdivide(g: Graph, k: int) -> FunctorResult:
    """Replace every edge by a path of k edges (k odd; k = 1 returns g).

    Loops become closed walks of length k through the original vertex.
    Interior vertices are labeled "<u>-<v>/<pos>".
    """
    _require_odd(k)
    if k == 1:
        origins = tuple(("v", v) for v in range(g.n))
        return FunctorResult(g, "gamma", 1, g, origins=origins)
    edges = g.edges()
    n_new = g.n + len(edges) * (k - 1)
    rows = [0] * n_new
    origins: list[tuple] = [("v", v) for v in range(g.n)]
    labels = [g.label_of(v) for v in range(g.n)]

    def connect(a: int, b: int) -> None:
        rows[a] |= 1 << b
        rows[b] |= 1 << a

    nxt = g.n
    for u, v in edges:
        chain = [u] + list(range(nxt, nxt + k - 1)) + [v]
        for pos in range(1, k):
            origins.append(("e", u, v, pos))
            labels.append(f"{u}-{v}/{pos}")
        nxt += k - 1
        for a, b in zip(chain, chain[1:]):
            connect(a, b)
    graph = Graph(n_new, tuple(rows), tuple(labels))
    return FunctorResult(graph, "gamma", k, g, origins=tuple(origins))


def subdivision_path(res: FunctorResult, a: int, b: int) -> list[int]:
    """Vertices of the subdivision path from a to b, counting a as 0th."""
    if res.functor != "gamma" or res.origins is None:
        raise ContractError("not a subdivision result")
    if res.k == 1:
        return [a, b]
    u, v = (a, b) if a <= b else (b, a)
    interior = [
        i
        for i, o in enumerate(res.origins)
        if o[0] == "e" and o[1] == u and o[2] == v
    ]
    if len(interior) != res.k - 1:
        raise ContractError(f"({a}, {b}) is not an edge of the base graph")
    if a > b:
        interior.reverse()
    return [a] + interior + [b]


# -- walk power ----------------------------------------------------------------

def walk_power(g: Graph, k: int) -> Graph:
    """Same vertices; u ~ v iff some walk of length exactly k joins them."""
    _require_odd(k)
    rows = g.adj
    for _ in range(k - 1):
        rows = tuple(_bool_mat_vec(rows, g.adj[v]) for v in range(g.n))
    return Graph(g.n, rows)


def _bool_mat_vec(rows: tuple[int, ...], reachable: int) -> int:
    out = 0
    for u in bits(reachable):
        out |= rows[u]
    return out


# -- right adjoint -------------------------------------------------------------

def omega(g: Graph, k: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> FunctorResult:
    """Right adjoint to the k-th walk power (k odd; k = 1 returns g).

    Vertices are tuples (A_0, ..., A_l), l = (k-1)/2, with A_0 a singleton
    and consecutive components fully joined; all components nonempty.
    Enumeration is depth-first, extending by nonempty subsets of the common
    neighborhood in ascending bitmask order.  This enumeration order is the
    canonical vertex order relied on by the Morse matchings.
    """
    _require_odd(k)
    if k == 1:
        tuples = tuple((1 << v,) for v in range(g.n))
        index = {t: i for i, t in enumerate(tuples)}
        return FunctorResult(g, "omega", 1, g, tuples=tuples, tuple_index=index)
    depth = (k - 1) // 2
    tuples: list[OmegaTuple] = []

    def extend(prefix: list[int], last: int) -> None:
        if len(prefix) == depth + 1:
            tuples.append(tuple(prefix))
            if len(tuples) > vertex_budget:
                raise ResourceError(
                    f"omega vertex budget {vertex_budget} exceeded at k={k}"
                )
            return
        cn = common_neighborhood(g, last)
        for nxt in submasks(cn):
            prefix.append(nxt)
            extend(prefix, nxt)
            prefix.pop()

    for v in range(g.n):
        extend([1 << v], 1 << v)

    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)
    rows = [0] * n
    for i in range(n):
        ti = tuples[i]
        # i == j covers loops, which arise iff the base graph has them
        for j in range(i, n):
            if _omega_adjacent(g, ti, tuples[j]):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    labels = tuple(omega_label(t) for t in tuples)
    graph = Graph(n, tuple(rows), labels)
    return FunctorResult(graph, "omega", k, g, tuples=tuple(tuples), tuple_index=index)


def _omega_adjacent(g: Graph, a: OmegaTuple, b: OmegaTuple) -> bool:
    for i in range(1, len(a)):
        if a[i - 1] & ~b[i] or b[i - 1] & ~a[i]:
            return False
    return is_joined(g, a[-1], b[-1])


def omega_label(tup: OmegaTuple) -> str:
    """Label grammar: v{m1 m2 ...}|{...}|... with members ascending."""
    head = next(bits(tup[0]))
    groups = ["{" + " ".join(str(m) for m in bits(comp)) + "}" for comp in tup[1:]]
    return str(head) + "|".join(groups)


def base_projection(res: FunctorResult) -> Homomorphism:
    """The homomorphism onto the base graph sending a tuple to its head vertex."""
    if res.tuples is None:
        raise ContractError("projection needs an omega-style result")
    mapping = tuple(next(bits(t[0])) for t in res.tuples)
    return Homomorphism(res.graph, res.base, mapping)


def truncate_projection(res: FunctorResult, lower: FunctorResult) -> Homomorphism:
    """Drop the last tuple component: a verified step from index k to k-2."""
    if res.tuples is None or lower.tuple_index is None:
        raise ContractError("truncation needs omega-style results")
    mapping = tuple(lower.index_of(t[:-1]) for t in res.tuples)
    return Homomorphism(res.graph, lower.graph, mapping)


# -- the saturation map and the shortcut graph --------------------------------

def saturate_tail(g: Graph, tup: OmegaTuple) -> OmegaTuple:
    """Replace the last component by the common neighborhood of the one before.

    Idempotent; fixes exactly the tuples whose tail is already maximal.
    """
    if len(tup) < 2:
        raise PreconditionError("saturation needs a tuple with at least two components")
    return tup[:-1] + (common_neighborhood(g, tup[-2]),)


def omega_prime(
    g: Graph, k: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> FunctorResult:
    """Shortcut extension of omega(g, k), k odd >= 3: same vertices, and for
    every edge {a, b} also edges from a and b to the saturated partners.
    """
    _require_odd(k, minimum=3)
    base = omega(g, k, vertex_budget)
    sat = [base.index_of(saturate_tail(g, t)) for t in base.tuples]
    rows = list(base.graph.adj)
    for i in range(base.graph.n):
        for j in bits(base.graph.adj[i]):
            if j < i:
                continue
            for x, y in ((i, sat[j]), (sat[i], j), (sat[i], sat[j])):
                rows[x] |= 1 << y
                rows[y] |= 1 << x
    graph = Graph(base.graph.n, tuple(rows), base.graph.labels)
    return FunctorResult(
        graph, "omega-prime", k, g, tuples=base.tuples, tuple_index=base.tuple_index
    )


def saturation_indices(g: Graph, res: FunctorResult) -> list[int]:
    """Index of the saturated partner of every tuple vertex."""
    return [res.index_of(saturate_tail(g, t)) for t in res.tuples]


# -- adjunction witnesses ------------------------------------------------------

def adjoint_witness_to_omega(
    g: Graph, f: Homomorphism, omega_h: FunctorResult
) -> Homomorphism:
    """Turn f : walk_power(g, k) -> H into a witness g -> omega(H, k).

    v maps to the tuple of image sets of the exact-distance-i walk
    neighborhoods of v, i = 0..l.  Isolated vertices of g are unconstrained
    and go to vertex 0 of the target.
    """
    if f.source.adj != walk_power(g, omega_h.k).adj:
        raise ContractError("witness source is not the expected walk power")
    depth = (omega_h.k - 1) // 2
    mapping = []
    for v in range(g.n):
        if g.adj[v] == 0:
            mapping.append(0)
            continue
        reach = 1 << v
        comps = []
        for _ in range(depth + 1):
            comps.append(_image_mask(f, reach))
            reach = _walk_step(g, reach)
        mapping.append(omega_h.index_of(tuple(comps)))
    return Homomorphism(g, omega_h.graph, tuple(mapping))


def adjoint_witness_from_omega(
    f: Homomorphism, omega_h: FunctorResult
) -> Homomorphism:
    """Turn f : G -> omega(H, k) into a witness walk_power(G, k) -> H."""
    if f.target.adj != omega_h.graph.adj:
        raise ContractError("witness target is not the given omega graph")
    power_g = walk_power(f.source, omega_h.k)
    mapping = tuple(next(bits(omega_h.tuples[f(v)][0])) for v in range(f.source.n))
    return Homomorphism(power_g, omega_h.base, mapping)


def _image_mask(f: Homomorphism, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << f(v)
    return out


def _walk_step(g: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= g.adj[v]
    return out


# -- subdivision embedding and the square-free retraction ----------------------

def subdivision_embedding(
    g: Graph,
    k: int,
    gamma: FunctorResult | None = None,
    omega_res: FunctorResult | None = None,
) -> Homomorphism:
    """The per-edge path embedding of the k-subdivision into omega(g, k).

    Along the path replacing edge (a, b), position j goes to a tuple whose
    first components alternate between {a} and {b} and whose tail alternates
    between a singleton and a full neighborhood; positions past the middle
    use the mirrored pattern from the b side.  The resulting homomorphism is
    injective exactly when g has no vertex of degree one: a pendant edge
    collapses two path positions onto the same tuple.
    """
    _require_odd(k, minimum=3)
    if g.has_loops():
        raise PreconditionError("subdivision embedding requires a loopless graph")
    if gamma is None:
        gamma = subdivide(g, k)
    if omega_res is None:
        omega_res = omega(g, k)
    depth = (k - 1) // 2

    def row_tuple(a: int, b: int, j: int) -> OmegaTuple:
        # pattern for position j <= depth measured from the a end
        comps = []
        for i in range(depth + 1):
            if i <= j:
                comps.append(1 << (a if (j - i) % 2 == 0 else b))
            else:
                comps.append(g.adj[a] if (i - j) % 2 == 1 else 1 << a)
        return tuple(comps)

    mapping = [0] * gamma.graph.n
    for v in range(g.n):
        # isolated vertices are unconstrained; position-0 rows ignore b
        if g.adj[v]:
            mapping[v] = omega_res.index_of(row_tuple(v, next(bits(g.adj[v])), 0))
    for idx, origin in enumerate(gamma.origins):
        if origin[0] != "e":
            continue
        _, u, v, pos = origin
        if pos <= depth:
            mapping[idx] = omega_res.index_of(row_tuple(u, v, pos))
        else:
            mapping[idx] = omega_res.index_of(row_tuple(v, u, k - pos))
    return Homomorphism(gamma.graph, omega_res.graph, tuple(mapping))


def squarefree_retraction(
    g: Graph,
    k: int,
    gamma: FunctorResult | None = None,
    omega_res: FunctorResult | None = None,
) -> Homomorphism:
    """Retraction omega(g, k) -> subdivide(g, k) for square-free loopless g.

    A tuple with singleton prefix of length j+1 (j maximal) and A_1 = {b}
    goes to the path position i between a and b, where i = j when j is even
    and i = k - j when j is odd; tuples whose prefix stops at A_0 go to a.
    """
    from .graphs import is_square_free

    _require_odd(k, minimum=3)
    if g.has_loops():
        raise PreconditionError("square-free retraction requires a loopless graph")
    if not is_square_free(g):
        raise PreconditionError("graph is not square-free")
    if gamma is None:
        gamma = subdivide(g, k)
    if omega_res is None:
        omega_res = omega(g, k)

    mapping = []
    for tup in omega_res.tuples:
        a = next(bits(tup[0]))
        j = 0
        while j + 1 < len(tup) and tup[j + 1].bit_count() == 1:
            j += 1
        if j == 0:
            mapping.append(a)
            continue
        b = next(bits(tup[1]))
        pos = j if j % 2 == 0 else k - j
        mapping.append(subdivision_path(gamma, a, b)[pos])
    return Homomorphism(omega_res.graph, gamma.graph, tuple(mapping))
