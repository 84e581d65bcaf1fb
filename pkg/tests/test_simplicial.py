import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_cliques
from polyflag.errors import InputError
from polyflag.homology import euler_characteristic, is_homology_sphere_profile
from polyflag.simplicial import (Poset, SimplicialComplex, SimplicialMap, barycentric_subdivision,
                                 boundary_of_simplex, clique_complex, complete_graph, cone, cycle_graph,
                                 dimension_coloring, discrete, full_subcomplex, graph, identity_map,
                                 is_coloring, is_conelike, is_flag, is_nondegenerate, join, link,
                                 missing_face, one_skeleton, order_complex, simplex)


@st.composite
def complexes(draw, max_vertices=7):
    n = draw(st.integers(1, max_vertices))
    vs = list(range(n))
    k = draw(st.integers(0, 6))
    facets = [draw(st.lists(st.sampled_from(vs), min_size=1, max_size=min(n, 4), unique=True)) for _ in range(k)]
    return SimplicialComplex.from_facets(vs, facets)


def test_from_facets_examples():
    assert len(SimplicialComplex.from_facets([1, 2, 3], [[1, 2, 3]])) == 7
    assert len(SimplicialComplex.from_facets([1, 2, 3], [[1, 2], [2, 3], [1, 3]])) == 6
    pt = SimplicialComplex.from_facets([1], [])
    assert pt.simplices == frozenset({(1,)})


def test_from_facets_errors():
    with pytest.raises(InputError):
        SimplicialComplex.from_facets([1, 2], [[1, 3]])
    with pytest.raises(InputError):
        SimplicialComplex.from_facets([1, 2], [[1, 1]])


def test_non_maximal_facets_allowed():
    L = SimplicialComplex.from_facets([1, 2, 3], [[1, 2], [1, 2, 3], [3]])
    assert L == simplex([1, 2, 3])


@given(complexes())
def test_downward_closed(L):
    for s in L.simplices:
        for k in range(1, len(s)):
            for f in combinations(s, k):
                assert f in L.simplices


def test_flag_examples():
    assert not is_flag(boundary_of_simplex([1, 2, 3]))
    assert is_flag(cycle_graph(4))
    assert missing_face(boundary_of_simplex([1, 2, 3])) == (1, 2, 3)
    assert missing_face(cycle_graph(4)) is None


def test_clique_complex_examples():
    assert clique_complex(complete_graph([1, 2, 3])) == simplex([1, 2, 3])
    assert clique_complex(cycle_graph(4)) == cycle_graph(4)
    with pytest.raises(InputError):
        clique_complex(simplex([1, 2, 3]))


@pytest.mark.parametrize("n", range(1, 9))
def test_clique_complex_of_complete_graph(n):
    # brute-force clique enumeration gives all 2^n - 1 nonempty subsets
    vs = list(range(n))
    expected = brute_cliques(vs, combinations(vs, 2))
    assert len(expected) == 2 ** n - 1
    assert clique_complex(complete_graph(vs)).simplices == frozenset(expected)


def test_clique_complex_matches_brute_force_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 8)
        vs = list(range(n))
        es = [e for e in combinations(vs, 2) if rng.random() < 0.5]
        assert clique_complex(graph(vs, es)).simplices == frozenset(brute_cliques(vs, es))


def test_isolated_vertices_are_cliques():
    g = graph([0, 1, 2], [(0, 1)])
    assert (2,) in clique_complex(g).simplices


def test_one_skeleton():
    assert one_skeleton(simplex([1, 2, 3])) == complete_graph([1, 2, 3])
    assert one_skeleton(cycle_graph(4)) == cycle_graph(4)


@given(complexes())
def test_flag_iff_clique_of_one_skeleton(L):
    K = clique_complex(one_skeleton(L))
    assert L.simplices <= K.simplices
    assert is_flag(L) == (K == L)


def test_order_complex_examples():
    chain = Poset.from_relation(["a", "b"], [("a", "b")])
    assert order_complex(chain).f_vector() == [2, 1]
    anti = Poset.from_relation(["a", "b"], [])
    assert order_complex(anti).f_vector() == [2]
    # face poset of an edge: chains {0}, {1}, {01}, {0}<{01}, {1}<{01}
    faces = simplex([0, 1]).poset()
    B = order_complex(faces)
    assert B.f_vector() == [3, 2]
    assert is_flag(B)


def test_poset_rejects_cycles():
    with pytest.raises(InputError):
        Poset.from_relation([1, 2], [(1, 2), (2, 1)])


def test_barycentric_examples():
    assert barycentric_subdivision(simplex([0, 1])).f_vector() == [3, 2]
    B = barycentric_subdivision(boundary_of_simplex([1, 2, 3]))
    assert B.f_vector() == [6, 6]
    assert is_homology_sphere_profile(B, 1)


@settings(max_examples=60)
@given(complexes())
def test_barycentric_is_flag_and_preserves_euler(L):
    B = barycentric_subdivision(L)
    assert is_flag(B)
    assert euler_characteristic(B) == euler_characteristic(L)


def test_link_examples():
    C4 = cycle_graph(4)
    assert link(C4, (1,)) == discrete([2, 4])
    assert link(simplex([1, 2, 3]), (1, 2)) == simplex([3])
    with pytest.raises(InputError):
        link(C4, (1, 3))


@settings(max_examples=60)
@given(complexes())
def test_link_preserves_flagness(L):
    K = clique_complex(one_skeleton(L))
    for s in K.simplices:
        assert is_flag(link(K, s))


def test_join_examples():
    assert join(discrete([0, 1]), discrete([2, 3])).f_vector() == [4, 4]
    assert join(discrete([0, 1]), discrete([2, 3])) == graph([0, 1, 2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)])
    L = cycle_graph(4)
    assert join(L, simplex([9])) == cone(L, 9)
    octa = join(join(discrete([0, 1]), discrete([2, 3])), discrete([4, 5]))
    assert octa.f_vector() == [6, 12, 8]
    with pytest.raises(InputError):
        join(discrete([0, 1]), discrete([1, 2]))


def test_join_relabel_returns_offset():
    J, shift = join(discrete([0, 1]), discrete([0, 1]), relabel=True)
    assert shift == {0: 2, 1: 3}
    assert J.f_vector() == [4, 4]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_join_of_zero_spheres_is_sphere(k):
    J = discrete([0, 1])
    for i in range(1, k):
        J = join(J, discrete([2 * i, 2 * i + 1]))
    assert is_homology_sphere_profile(J, k - 1)


def test_full_subcomplex_examples():
    assert full_subcomplex(simplex([1, 2, 3]), [1, 2]) == simplex([1, 2])
    C4 = cycle_graph(4)
    assert full_subcomplex(C4, C4.vertices) == C4
    assert full_subcomplex(C4, [1, 3]) == discrete([1, 3])
    with pytest.raises(InputError):
        full_subcomplex(C4, [7])


@given(complexes(), st.data())
def test_full_subcomplex_is_full(L, data):
    sub = data.draw(st.sets(st.sampled_from(L.vertices)))
    F = full_subcomplex(L, sub)
    for s in L.simplices:
        assert (s in F.simplices) == (set(s) <= sub)


def test_colorings():
    B = barycentric_subdivision(simplex([0, 1, 2]))
    assert is_coloring(dimension_coloring(B))
    edge = simplex([0, 1])
    const = SimplicialMap(edge, simplex([0]), {0: 0, 1: 0})
    assert not is_nondegenerate(const)
    assert is_coloring(identity_map(simplex([0, 1, 2])))
    # identity of a non-simplex is nondegenerate but not a coloring
    assert not is_coloring(identity_map(cycle_graph(4)))


def test_simplicial_map_validation():
    with pytest.raises(InputError):
        SimplicialMap(simplex([0, 1]), discrete([0, 1]), {0: 0, 1: 1})


def test_conelike():
    C = cone(cycle_graph(4), 0)
    assert is_conelike(C, 0)
    assert not any(is_conelike(cycle_graph(4), v) for v in range(1, 5))
    assert all(is_conelike(simplex(range(4)), v) for v in range(4))
    with pytest.raises(InputError):
        is_conelike(C, 17)


def test_json_roundtrip():
    L = cycle_graph(5)
    assert SimplicialComplex.from_json(L.to_json()) == L
    with pytest.raises(InputError):
        SimplicialComplex.from_json({"facets": [[1]]})
