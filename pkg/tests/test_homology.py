import random

import pytest
from hypothesis import given, settings

from oracles import rational_rank, snf_oracle
from polyflag.errors import CheckFailed, InputError
from polyflag.homology import (CellComplex, cell_isomorphism_signs, chain_complex_of_simplicial,
                               euler_characteristic, homology, is_acyclic, is_homology_sphere_profile,
                               product_complex, smith_normal_form)
from polyflag.simplicial import (barycentric_subdivision, boundary_of_simplex, cone, cycle_graph,
                                 discrete, join, projective_plane, simplex)
from test_simplicial import complexes


def octahedron():
    return join(join(discrete([0, 1]), discrete([2, 3])), discrete([4, 5]))


def test_edge_chain_complex():
    C = chain_complex_of_simplicial(simplex([1, 2]))
    assert C.counts() == [2, 1]
    assert C.boundary_of((1, 2)) == {(2,): 1, (1,): -1}


def test_boundary_squared_zero_checked():
    chain_complex_of_simplicial(boundary_of_simplex([1, 2, 3]))._validate()
    C = chain_complex_of_simplicial(projective_plane())
    C._validate()
    assert C.counts() == [6, 15, 10]
    with pytest.raises(InputError):
        CellComplex.build([("a", 0, {}), ("b", 0, {}), ("e", 1, {"a": 1, "b": -1}),
                           ("f", 1, {"a": 1, "b": -1}), ("s", 2, {"e": 1, "f": 1})])


def test_snf_examples():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == ([1, 1, 1], 3)
    assert smith_normal_form([[2, 0], [0, 0]]) == ([2], 1)
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == ([2, 6, 12], 3)


def _random_matrix(rng, m, n, lo=-6, hi=6, density=0.7):
    return [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def test_snf_against_minors_oracle_6x6():
    rng = random.Random(11)
    for _ in range(40):
        M = _random_matrix(rng, 6, 6)
        divs, rank = smith_normal_form(M)
        assert rank == rational_rank(M)
        assert divs == snf_oracle(M)
        assert all(divs[k + 1] % divs[k] == 0 for k in range(len(divs) - 1))


def test_snf_large_entries_exact():
    M = [[10 ** 30, 0], [0, 3 * 10 ** 30]]
    assert smith_normal_form(M) == ([10 ** 30, 3 * 10 ** 30], 2)


def test_snf_invariant_under_unimodular_operations():
    rng = random.Random(5)
    for _ in range(30):
        M = _random_matrix(rng, 5, 4)
        ref = smith_normal_form(M)
        A = [r[:] for r in M]
        for _ in range(10):
            i, j = rng.sample(range(5), 2)
            q = rng.randint(-3, 3)
            A[i] = [a + q * b for a, b in zip(A[i], A[j])]
            c1, c2 = rng.sample(range(4), 2)
            q = rng.randint(-3, 3)
            for r in A:
                r[c1] += q * r[c2]
        assert smith_normal_form(A) == ref


def test_homology_examples():
    h = homology(octahedron(), reduced=True)
    assert h.betti == [0, 0, 1] and not any(h.torsion)
    h = homology(projective_plane())
    assert h.betti == [1, 0, 0]
    assert h.torsion == [[], [2], []]
    assert is_acyclic(cone(projective_plane(), 99))
    assert homology(octahedron()).to_json() == {"betti": [1, 0, 1], "torsion": [[], [], []]}


def test_euler_characteristic():
    assert euler_characteristic(octahedron()) == 2
    C = chain_complex_of_simplicial(octahedron())
    h = homology(C)
    assert euler_characteristic(C) == sum((-1) ** d * b for d, b in enumerate(h.betti))


def test_acyclic_and_sphere_profiles():
    assert is_acyclic(simplex([0]))
    assert is_homology_sphere_profile(boundary_of_simplex([1, 2, 3]), 1)
    assert not is_homology_sphere_profile(boundary_of_simplex([1, 2, 3]), 2)
    assert not is_acyclic(discrete([0, 1]))


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=8))
def test_homology_invariant_under_subdivision(L):
    assert homology(barycentric_subdivision(L)).trimmed() == homology(L).trimmed()


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=5), complexes(max_vertices=4))
def test_join_reduced_euler(L1, L2):
    J, _ = join(L1, L2, relabel=True)
    red = lambda K: euler_characteristic(K) - 1
    assert red(J) == -red(L1) * red(L2)


def test_product_boundary_squares_to_zero():
    I = CellComplex.build([("0", 0, {}), ("1", 0, {}), ("I", 1, {"1": 1, "0": -1})])
    P = product_complex([I, I, I])
    P._validate()
    assert P.counts() == [8, 12, 6, 1]
    assert is_acyclic(P)


def test_cell_isomorphism_signs():
    A = chain_complex_of_simplicial(cycle_graph(3))
    B = chain_complex_of_simplicial(cycle_graph(3, start=4))
    phi = {k: tuple(v + 3 for v in k) for k in A.keys()}
    assert set(cell_isomorphism_signs(A, B, phi).values()) == {1}
    # a map that forgets an incidence is rejected
    phi_bad = dict(phi)
    phi_bad[(1,)], phi_bad[(2,)] = (5,), (4,)
    with pytest.raises(CheckFailed):
        cell_isomorphism_signs(A, B, phi_bad)


def test_json_roundtrip():
    C = chain_complex_of_simplicial(projective_plane())
    D = CellComplex.from_json(C.to_json())
    assert D.counts() == C.counts()
    assert homology(D).to_json() == homology(C).to_json()
    with pytest.raises(InputError):
        CellComplex.from_json({"cells": [[1]]})
