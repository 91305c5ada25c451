from itertools import combinations

import pytest

from omegalab.bitset import bits, mask_of
from omegalab.errors import ContractError, ParameterError, PreconditionError
from omegalab.functors import (
    Homomorphism,
    adjoint_witness_from_omega,
    adjoint_witness_to_omega,
    base_projection,
    omega,
    omega_label,
    omega_prime,
    saturate_tail,
    saturation_indices,
    subdivide,
    subdivision_embedding,
    subdivision_path,
    squarefree_retraction,
    truncate_projection,
    walk_power,
)
from omegalab.graphs import (
    Graph,
    clique,
    common_neighborhood,
    cycle_graph,
    is_isomorphic,
    is_joined,
    path_graph,
    petersen,
    same_adjacency,
)
from omegalab.homsearch import hom_exists


def count_omega_vertices_bruteforce(g: Graph, k: int) -> int:
    """Independent oracle: enumerate tuples over all subset combinations."""
    depth = (k - 1) // 2
    subsets = [mask_of(c) for r in range(1, g.n + 1) for c in combinations(range(g.n), r)]

    def extend(prefix):
        if len(prefix) == depth + 1:
            return 1
        return sum(
            extend(prefix + [s])
            for s in subsets
            if is_joined(g, prefix[-1], s)
        )

    return sum(extend([1 << v]) for v in range(g.n))


def walks_of_length(g: Graph, k: int) -> set[tuple[int, int]]:
    """Independent oracle for the walk power: breadth-first walk expansion."""
    pairs = {(u, v) for u in range(g.n) for v in bits(g.adj[u])}
    for _ in range(k - 1):
        pairs = {(u, w) for u, v in pairs for w in bits(g.adj[v])}
    return pairs


def test_subdivide_examples():
    assert is_isomorphic(subdivide(clique(2), 3).graph, path_graph(4))
    assert is_isomorphic(subdivide(cycle_graph(5), 3).graph, cycle_graph(15))
    g = petersen()
    assert same_adjacency(subdivide(g, 1).graph, g)
    with pytest.raises(ParameterError):
        subdivide(g, 2)


def test_subdivide_loop_becomes_closed_walk():
    loop = Graph.from_edges(1, [(0, 0)])
    tri = subdivide(loop, 3).graph
    assert is_isomorphic(tri, cycle_graph(3))


def test_subdivision_path_orientation():
    res = subdivide(cycle_graph(5), 3)
    fwd = subdivision_path(res, 0, 1)
    back = subdivision_path(res, 1, 0)
    assert fwd == back[::-1] and len(fwd) == 4


def test_power_examples():
    c5 = cycle_graph(5)
    assert same_adjacency(walk_power(c5, 1), c5)
    # expected adjacency computed by independent walk enumeration
    expected = walks_of_length(c5, 3)
    got = walk_power(c5, 3)
    assert {(u, v) for u in range(5) for v in bits(got.adj[u])} == expected
    assert same_adjacency(got, clique(5))
    p3c3 = walk_power(cycle_graph(3), 3)
    assert walks_of_length(cycle_graph(3), 3) == {
        (u, v) for u in range(3) for v in bits(p3c3.adj[u])
    }
    assert all(p3c3.has_edge(v, v) for v in range(3))


def test_omega_counts_against_bruteforce():
    for g, k in [(clique(4), 3), (clique(3), 5), (cycle_graph(5), 3), (path_graph(4), 3)]:
        assert omega(g, k).graph.n == count_omega_vertices_bruteforce(g, k)
    assert omega(clique(4), 3).graph.n == 28


def test_omega_identity_and_small_cases():
    g = petersen()
    assert same_adjacency(omega(g, 1).graph, g)
    # in K2 every component is forced to a singleton
    o = omega(clique(2), 5)
    assert o.graph.n == 2 and o.graph.edge_count() == 1


def test_omega_of_looped_graph_keeps_loops():
    # a looped vertex yields self-adjacent tuples, e.g. ({v}, {v})
    g = Graph.from_edges(2, [(0, 0), (0, 1)])
    o = omega(g, 3)
    self_adjacent = [i for i in range(o.graph.n) if o.graph.has_edge(i, i)]
    assert self_adjacent
    loop_tuple = o.index_of((1, 1))  # ({0}, {0})
    assert loop_tuple in self_adjacent
    # adjointness sanity must survive loops on the target side
    from omegalab.homsearch import hom_exists

    for probe in (clique(3), cycle_graph(5)):
        left = hom_exists(walk_power(probe, 3), g) is not None
        right = hom_exists(probe, o.graph) is not None
        assert left == right


def test_omega_of_k4_has_no_short_odd_walks():
    from omegalab.graphs import min_odd_closed_walk

    assert min_odd_closed_walk(omega(clique(4), 5).graph) > 5


def test_omega_budget():
    from omegalab.errors import ResourceError

    with pytest.raises(ResourceError):
        omega(clique(5), 5, vertex_budget=10)


def test_omega_enumeration_order_is_canonical():
    # depth-first by head vertex, extending by subsets in ascending bitmask
    # order; frozen because the Morse matchings key off this order
    o = omega(clique(3), 3)
    assert o.tuples == (
        (1, 2), (1, 4), (1, 6),
        (2, 1), (2, 4), (2, 5),
        (4, 1), (4, 2), (4, 3),
    )


def test_omega_labels_match_tuple_grammar():
    o = omega(clique(4), 3)
    assert omega_label((mask_of([1]), mask_of([2, 3]))) == "1{2 3}"
    assert omega_label((mask_of([0]), mask_of([1]), mask_of([0, 2]))) == "0{1}|{0 2}"
    labels = set(o.graph.labels)
    assert "0{1 2 3}" in labels and "1{0}" in labels


def test_projection_examples():
    g = clique(4)
    o1 = omega(g, 1)
    assert base_projection(o1).mapping == tuple(range(4))
    o3 = omega(g, 3)
    p = base_projection(o3)  # validates edge preservation on construction
    coloring = Homomorphism.identity(g)
    composed = coloring.compose(p)
    assert composed.target.n == 4


def test_projection_chain_composes():
    g = clique(3)
    o5, o3, o1 = omega(g, 5), omega(g, 3), omega(g, 1)
    step1 = truncate_projection(o5, o3)
    step2 = truncate_projection(o3, o1)
    chain = step2.compose(step1)
    assert chain.target.n == g.n
    assert chain.mapping == base_projection(o5).mapping


def test_saturate_tail():
    g = clique(4)
    tup = (mask_of([1]), mask_of([2]))
    sat = saturate_tail(g, tup)
    assert sat == (mask_of([1]), common_neighborhood(g, mask_of([1])))
    assert saturate_tail(g, sat) == sat
    # fixed points are exactly the tuples with maximal tail
    o = omega(g, 3)
    for t in o.tuples:
        fixed = saturate_tail(g, t) == t
        assert fixed == (t[-1] == common_neighborhood(g, t[-2]))


def test_omega_prime_examples():
    g = cycle_graph(5)
    o = omega(g, 3)
    op = omega_prime(g, 3)
    for i in range(o.graph.n):
        assert o.graph.adj[i] & ~op.graph.adj[i] == 0  # edges only added
    assert same_adjacency(omega_prime(clique(2), 3).graph, omega(clique(2), 3).graph)


def test_omega_prime_saturated_subgraph_is_lower_omega():
    for g in (clique(3), clique(4), cycle_graph(5)):
        op = omega_prime(g, 3)
        lower = omega(g, 1)
        sat = saturation_indices(g, op)
        image = sorted({sat[i] for i in range(op.graph.n)})
        mapping = {v: lower.index_of(op.tuples[v][:-1]) for v in image}
        assert sorted(mapping.values()) == list(range(lower.graph.n))
        for a in image:
            for b in image:
                if a < b:
                    assert op.graph.has_edge(a, b) == lower.graph.has_edge(
                        mapping[a], mapping[b]
                    )


def test_adjoint_witnesses_roundtrip():
    g, h, k = cycle_graph(5), clique(5), 3
    oh = omega(h, k)
    f = hom_exists(walk_power(g, k), h)
    assert f is not None
    w = adjoint_witness_to_omega(g, f, oh)  # validates
    back = adjoint_witness_from_omega(w, oh)
    assert back.source.n == g.n and back.target.n == h.n


def test_adjoint_witness_identity_at_index_one():
    g, h = cycle_graph(5), clique(3)
    oh = omega(h, 1)
    f = hom_exists(walk_power(g, 1), h)
    w = adjoint_witness_to_omega(g, f, oh)
    assert w.mapping == f.mapping


def test_adjoint_witness_rejects_wrong_source():
    g, h = cycle_graph(5), clique(5)
    oh = omega(h, 3)
    f = hom_exists(g, h)  # not the walk power of g
    with pytest.raises(ContractError):
        adjoint_witness_to_omega(g, f, oh)


def test_embedding_examples():
    c5 = cycle_graph(5)
    emb = subdivision_embedding(c5, 3)
    assert emb.is_injective()
    o = omega(c5, 3)
    for v in range(5):
        tup = o.tuples[emb(v)]
        assert tup == (1 << v, c5.adj[v])  # original vertices hit ({a}, N(a))
    pet = petersen()
    assert subdivision_embedding(pet, 3).is_injective()
    assert subdivision_embedding(pet, 5).is_injective()


def test_embedding_on_k2_folds():
    # the right adjoint of K2 is K2 itself, so the path embedding cannot be
    # injective: it validates as a homomorphism and folds the path
    emb = subdivision_embedding(clique(2), 3)
    assert not emb.is_injective()
    assert emb.target.n == 2


def test_retraction_examples():
    c5 = cycle_graph(5)
    gamma = subdivide(c5, 3)
    o = omega(c5, 3)
    ret = squarefree_retraction(c5, 3, gamma, o)
    # all-singleton tuples land in the middle of their path (position
    # 2l+1-l for odd l), mirroring the all-singleton rows of the embedding
    for i, tup in enumerate(o.tuples):
        if all(c.bit_count() == 1 for c in tup):
            a = next(bits(tup[0]))
            b = next(bits(tup[1]))
            assert subdivision_path(gamma, a, b).index(ret(i)) == 2
    emb = subdivision_embedding(c5, 3, gamma, o)
    endo = ret.compose(emb)  # C15 -> C15 endomorphism, validated
    assert endo.source.n == 15 and endo.target.n == 15


def test_retraction_requires_square_free():
    with pytest.raises(PreconditionError):
        squarefree_retraction(clique(4), 3)
    with pytest.raises(PreconditionError):
        squarefree_retraction(Graph.from_edges(1, [(0, 0)]), 3)


def test_retraction_both_tail_parities():
    # index 7 exercises an even number of middle components
    for g in (cycle_graph(5), cycle_graph(7), petersen()):
        squarefree_retraction(g, 5)
        squarefree_retraction(g, 7)


def test_composition_equivalence_with_ninth_power():
    for g in (clique(2), clique(3)):
        o9 = omega(g, 9)
        o33 = omega(omega(g, 3).graph, 3)
        assert (hom_exists(o9.graph, o33.graph) is not None) and (
            hom_exists(o33.graph, o9.graph) is not None
        )


def test_hom_iff_adjoint_hom():
    pairs = [
        (clique(2), clique(3)),
        (clique(3), clique(2)),
        (cycle_graph(5), clique(3)),
        (clique(3), cycle_graph(5)),
    ]
    for g, h in pairs:
        direct = hom_exists(g, h) is not None
        lifted = hom_exists(omega(g, 3).graph, omega(h, 3).graph) is not None
        assert direct == lifted
