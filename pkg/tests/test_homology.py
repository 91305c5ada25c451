import random

from omegalab.boxcomplex import build_box
from omegalab.functors import omega
from omegalab.graphs import clique, cycle_graph, tensor_product
from omegalab.homology import (
    betti_mod2,
    betti_of_complex,
    convolve,
    euler_characteristic,
    euler_of_complex,
)

from util import betti_oracle, component_count, random_free_complex


def full_simplex_faces(n):
    return [m for m in range(1, 1 << n)]


def test_contractible_point_and_simplex():
    assert betti_mod2([0b1]) == (1,)
    assert betti_mod2(full_simplex_faces(4)) == (1,)
    assert euler_characteristic([0b1]) == 1
    assert euler_characteristic(full_simplex_faces(4)) == 1


def test_sphere_boundaries():
    # boundary of the full simplex on n+2 vertices is an n-sphere
    for n_tokens, expect in [(3, (1, 1)), (4, (1, 0, 1)), (5, (1, 0, 0, 1))]:
        faces = [m for m in range(1, 1 << n_tokens) if m != (1 << n_tokens) - 1]
        assert betti_mod2(faces) == expect


def test_box_betti_values():
    assert betti_of_complex(build_box(clique(2))) == (2,)
    assert betti_of_complex(build_box(clique(4))) == (1, 0, 1)
    assert betti_of_complex(build_box(cycle_graph(5))) == (1, 1)


def test_box_betti_against_dense_oracle():
    for g in (clique(2), clique(3), clique(4), cycle_graph(5), cycle_graph(7)):
        faces = build_box(g).simplices()
        assert betti_mod2(faces) == betti_oracle(faces)


def test_euler_examples():
    assert euler_of_complex(build_box(clique(2))) == 2  # 4 vertices - 2 edges
    assert euler_of_complex(build_box(clique(4))) == 2  # sphere
    chi = euler_of_complex(build_box(cycle_graph(5)))
    betti = betti_of_complex(build_box(cycle_graph(5)))
    assert chi == sum((-1) ** i * b for i, b in enumerate(betti)) == 0


def test_euler_equals_alternating_betti_on_random_complexes():
    rng = random.Random(11)
    for _ in range(30):
        k = random_free_complex(rng, max_shore=6)
        faces = k.simplices()
        betti = betti_mod2(faces)
        assert euler_characteristic(faces) == sum(
            (-1) ** i * b for i, b in enumerate(betti)
        )
        assert betti[0] == component_count(faces)


def test_kunneth_convolution():
    b2 = betti_of_complex(build_box(clique(2)))
    b3 = betti_of_complex(build_box(clique(3)))
    bc5 = betti_of_complex(build_box(cycle_graph(5)))
    assert convolve(b2, b2) == (4,)
    assert convolve(b3, b3) == (1, 2, 1)
    assert convolve(b3, bc5) == (1, 2, 1)
    assert betti_of_complex(build_box(tensor_product(clique(2), clique(2)))) == (4,)
    assert betti_of_complex(build_box(tensor_product(clique(3), clique(3)))) == (1, 2, 1)
    assert betti_of_complex(build_box(tensor_product(clique(3), cycle_graph(5)))) == (1, 2, 1)


def test_adjoint_box_betti_matches_base():
    for n in (3, 4):
        base = betti_of_complex(build_box(clique(n)))
        lifted = betti_of_complex(build_box(omega(clique(n), 3).graph))
        assert base == lifted


def test_boundary_squares_to_zero():
    from omegalab.homology import _by_dimension, boundary_columns

    faces = sorted(build_box(clique(4)).simplices())
    levels = _by_dimension(faces)
    for d in range(2, len(levels)):
        upper = boundary_columns(levels[d - 1], levels[d])
        lower = boundary_columns(levels[d - 2], levels[d - 1])
        for col in upper:
            acc = 0
            m = col
            while m:
                low = m & -m
                m ^= low
                acc ^= lower[low.bit_length() - 1]
            assert acc == 0
