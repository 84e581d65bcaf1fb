"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import random
from functools import lru_cache
from itertools import combinations

from oracles import all_complexes, betti_oracle, brute_polyhedral_product, canonical_form, snf_oracle
from polyflag.corners import (closed_manifold_certificate, colored_chamber, cube, cube_corner, gromov_check,
                              link_join_decomposition, pullback, pullback_to_basic_construction_map,
                              pullback_to_chamber_map)
from polyflag.coxeter import CoxeterSystem, enumerate_finite_group, racs_from_graph, validate
from polyflag.errors import CheckFailed
from polyflag.homology import (cell_isomorphism_signs, chain_complex_of_simplicial, euler_characteristic,
                               homology, is_homology_sphere_profile, smith_normal_form)
from polyflag.mirrors import (RankOneBuildingProduct, basic_construction, building_construction,
                              coxeter_complex, simplex_chamber)
from polyflag.polyhedral import (building_to_cone_map, chamber, chamber_mirrored, cone_pair_product, disk1_pair, disk2_pair,
                                 moment_angle, polyhedral_product, real_toric)
from polyflag.presentations import (abelian_invariants, cyclic_group, graph_product, pi1_from_two_skeleton,
                                    raag, racg, reidemeister_schreier)
from polyflag.simplicial import (SimplicialComplex, SimplicialMap, barycentric_subdivision, boundary_of_simplex,
                                 clique_complex, complete_graph, cycle_graph, discrete, graph, greedy_coloring,
                                 is_flag, one_skeleton, projective_plane, simplex)


def report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}{': ' + detail if detail else ''}")
    assert ok, detail


def from_simplices(n, simplices):
    return SimplicialComplex.from_simplices(range(n), simplices)


def random_complex(rng, n, p=0.5):
    vs = list(range(n))
    facets = [rng.sample(vs, rng.randint(1, n)) for _ in range(rng.randint(0, 5))]
    return SimplicialComplex.from_facets(vs, facets)


def random_flag(rng, n, p=0.5):
    return clique_complex(graph(range(n), [e for e in combinations(range(n), 2) if rng.random() < p]))


@lru_cache(maxsize=None)
def iso_classes(n):
    """One labeled representative per isomorphism class of complexes on n vertices."""
    reps = {}
    for S in all_complexes(n):
        reps.setdefault(canonical_form(n, S), S)
    return list(reps.values())


def full_coloring(L):
    return SimplicialMap(L, simplex(range(len(L.vertices))), {v: k for k, v in enumerate(L.vertices)})


def test_criterion_01_flagness():
    rng = random.Random(1)
    ok = not is_flag(boundary_of_simplex([1, 2, 3])) and is_flag(cycle_graph(4))
    bad = None
    for _ in range(100):
        L = random_complex(rng, rng.randint(1, 8))
        if not is_flag(barycentric_subdivision(L)):
            bad = bad or L
    total = 0
    for n in range(1, 6):
        for S in all_complexes(n):
            L = from_simplices(n, S)
            total += 1
            if is_flag(L) != (L == clique_complex(one_skeleton(L))):
                bad = bad or L
    report("criterion 1 flagness", ok and bad is None, f"{total} complexes checked exhaustively")


def test_criterion_02_coxeter_complexes():
    t = enumerate_finite_group(racs_from_graph(complete_graph(range(3))))
    U = basic_construction(t, simplex_chamber(range(3)))
    ok1 = U.counts() == [6, 12, 8] and is_homology_sphere_profile(U, 2)
    s3 = enumerate_finite_group(CoxeterSystem(validate([[1, 3], [3, 1]])))
    V = basic_construction(s3, simplex_chamber(range(2)))
    degrees = [len(V.cofaces(v)) for v in V.cells[0]]
    ok2 = V.counts() == [6, 6] and set(degrees) == {2} and V.is_connected() and is_homology_sphere_profile(V, 1)
    report("criterion 2 Coxeter complexes", ok1 and ok2, f"U((C2)^3, simplex) cells {U.counts()}; U(S3, edge) cells {V.counts()}")


def _brute_agrees(L, pair, kind):
    idx = {v: k for k, v in enumerate(L.vertices)}
    counts, mats = brute_polyhedral_product({tuple(idx[v] for v in s) for s in L.simplices},
                                            len(L.vertices), kind)
    Z = polyhedral_product(L, pair)
    return Z.counts() == counts and homology(Z).betti == betti_oracle(counts, mats)


def test_criterion_03_polyhedral_products():
    A = real_toric(boundary_of_simplex([1, 2, 3]))
    ok = len(A) == 26 and is_homology_sphere_profile(A, 2)
    B = real_toric(cycle_graph(4))
    ok = ok and B.counts() == [16, 32, 16] and euler_characteristic(B) == 0 and homology(B).betti == [1, 2, 1]
    C = moment_angle(discrete([0, 1]))
    ok = ok and is_homology_sphere_profile(C, 3)
    ok = ok and _brute_agrees(boundary_of_simplex([1, 2, 3]), disk1_pair(), "D1")
    ok = ok and _brute_agrees(cycle_graph(4), disk1_pair(), "D1")
    ok = ok and _brute_agrees(discrete([0, 1]), disk2_pair(), "D2")
    report("criterion 3 polyhedral products", ok, "26 cells / (16,32,16) / S^3, matched by tuple enumeration")


def test_criterion_04_cone_pair_identification():
    rng = random.Random(4)
    bad, checked = None, 0
    for _ in range(20):
        n = rng.randint(1, 5)
        L = random_complex(rng, n)
        for E in ([[f"e{k}" for k in range(rng.choice([2, 3]))] for _ in range(n)],
                  [["a", "b"]] * n, [["a", "b", "c"]] * n):
            V = building_construction(RankOneBuildingProduct.of(E), chamber_mirrored(L))
            C = cone_pair_product(L, E)
            try:
                cell_isomorphism_signs(V, C, building_to_cone_map(L, V))
            except CheckFailed:
                bad = bad or L
            checked += 1
    report("criterion 4 cone-pair identification", bad is None, f"{checked} (L, E) instances graded-cell-isomorphic")


def _pullback_is_chamber(L, f):
    Y = pullback(f, cube_corner(len(f.codomain.vertices) - 1))
    Z = chamber(L)
    try:
        cell_isomorphism_signs(Y, Z, pullback_to_chamber_map(f, Y))
    except CheckFailed:
        return False
    return homology(Y).trimmed() == homology(Z).trimmed()


def test_criterion_05_pullback_identifications():
    bad, checked = None, 0
    cases = [(n, S) for n in range(1, 5) for S in all_complexes(n)] + [(5, S) for S in iso_classes(5)]
    rng = random.Random(5)
    cases += [(6, random_complex(rng, 6).simplices) for _ in range(30)]
    for n, S in cases:
        L = from_simplices(n, S)
        if not _pullback_is_chamber(L, full_coloring(L)):
            bad = bad or L
        checked += 1
    for n in (1, 2):
        t = enumerate_finite_group(racs_from_graph(complete_graph(range(n + 1))))
        K, coloring, cosets = coxeter_complex(t)
        X = cube_corner(n)
        Y = pullback(coloring, X)
        U = basic_construction(t, X.base)
        try:
            cell_isomorphism_signs(Y, U, pullback_to_basic_construction_map(Y, cosets))
        except CheckFailed:
            bad = bad or K
    report("criterion 5 pullback identifications", bad is None,
           f"f*(cube) = chamber(L) on {checked} complexes; f*(X) = U(W,X) for (C2)^2, (C2)^3")


def _colored_pairs(rng, count, lo, hi):
    out = []
    while len(out) < count:
        L, N = random_flag(rng, rng.randint(lo, hi)), random_flag(rng, rng.randint(lo, hi))
        f, iota = greedy_coloring(L), greedy_coloring(N)
        if len(f.codomain.vertices) == len(iota.codomain.vertices):
            out.append((L, f, N, iota))
    return out


def test_criterion_06_gromov_and_links():
    rep = gromov_check(real_toric(boundary_of_simplex([1, 2, 3])))
    ok = rep["verdict"] == "FAIL" and len(rep["vertices"]) == 8
    ok = ok and all(not v["flag"] and v["witness_link"].f_vector() == [3, 3] and len(v["witness"]) == 3
                    for v in rep["vertices"])
    rng = random.Random(6)
    pairs = _colored_pairs(rng, 25, 1, 6)
    for L, f, N, iota in pairs:
        Y = pullback(f, colored_chamber(N, iota), require_corner=False)
        ok = ok and gromov_check(Y)["verdict"] == "PASS"
    faces = 0
    for L, f, N, iota in _colored_pairs(rng, 5, 2, 5):
        Y = pullback(f, colored_chamber(N, iota), require_corner=False)
        for F in Y.keys():
            ok = ok and link_join_decomposition(Y, f, N, F)["isomorphic"]
            faces += 1
    report("criterion 6 Gromov links", ok, f"25 flag pullbacks pass; join decomposition on {faces} faces")


def _real_toric_invariants(L):
    return abelian_invariants(pi1_from_two_skeleton(real_toric(L)))


def _rs_invariants(L):
    G = one_skeleton(L)
    t = enumerate_finite_group(racs_from_graph(complete_graph(G.vertices)))
    K = reidemeister_schreier(racg(G), t, {f"s{v}": (v,) for v in G.vertices})
    return abelian_invariants(K)


def test_criterion_07_fundamental_groups():
    z_cache, rs_cache = {}, {}
    bad, checked = None, 0
    cases = [(n, S) for n in range(1, 6) for S in all_complexes(n)]
    rng = random.Random(7)
    cases += [(6, random_complex(rng, 6).simplices) for _ in range(20)]
    for n, S in cases:
        L = from_simplices(n, S)
        zkey = canonical_form(n, S) if n < 6 else S
        if zkey not in z_cache:
            z_cache[zkey] = _real_toric_invariants(L)
        ekey = (n, frozenset(s for s in S if len(s) == 2))
        if ekey not in rs_cache:
            rs_cache[ekey] = _rs_invariants(L)
        if z_cache[zkey] != rs_cache[ekey]:
            bad = bad or L
        checked += 1
    report("criterion 7 fundamental groups", bad is None, f"{checked} complexes; abelian invariants agree")


def test_criterion_08_graph_product_laws():
    groups = {0: cyclic_group(2, "a"), 1: cyclic_group(3, "b"), 2: cyclic_group(None, "c"),
              3: cyclic_group(5, "d")}
    n_rel = sum(len(g.relators) for g in groups.values())
    P, _ = graph_product(discrete(range(4)), groups)
    ok = len(P.relators) == n_rel and len(P.generators) == 4
    Q, _ = graph_product(complete_graph(range(4)), groups)
    ok = ok and len(Q.relators) == n_rel + 6
    ok = ok and abelian_invariants(Q).free_rank == 1 and abelian_invariants(Q).torsion == (30,)
    for n in range(1, 7):
        G = cycle_graph(n) if n >= 3 else discrete(range(n))
        ok = ok and abelian_invariants(raag(G)).free_rank == n and not abelian_invariants(raag(G)).torsion
        ok = ok and abelian_invariants(racg(G)).torsion == (2,) * n and abelian_invariants(racg(G)).free_rank == 0
    report("criterion 8 graph product laws", ok, "free product, direct product, RAAG and RACG abelianizations")


def test_criterion_09_manifold_certificates():
    Q = cube(3)
    surface = Q.subcomplex([c for c in Q.keys() if c != ("I", "I", "I")])
    tri, sq = boundary_of_simplex([1, 2, 3]), cycle_graph(4)
    passing = [(surface, 2), (real_toric(sq), 2), (real_toric(tri), 2),
               (polyhedral_product(tri, disk1_pair()), 2), (polyhedral_product(sq, disk1_pair()), 2),
               (moment_angle(tri), 5), (moment_angle(sq), 6)]
    ok = all(closed_manifold_certificate(Y, n)["verdict"] == "PASS" for Y, n in passing)
    rep = closed_manifold_certificate(chamber(sq), 2)
    w = rep["checks"]["pseudomanifold"]["witness"]
    ok = ok and rep["verdict"] == "FAIL" and w is not None and w["cofaces"] == 1
    report("criterion 9 manifold certificates", ok, f"{len(passing)} closed manifolds pass; chamber(4-cycle) fails at {w}")


def test_criterion_10_homology_engine():
    rng = random.Random(10)
    ok = True
    for _ in range(200):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        M = [[rng.randint(-5, 5) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(m)]
        ok = ok and smith_normal_form(M)[0] == snf_oracle(M)
    h = homology(chain_complex_of_simplicial(projective_plane()))
    ok = ok and h.torsion[1] == [2] and h.betti == [1, 0, 0] and not h.torsion[2]
    report("criterion 10 homology engine", ok, "200 SNF instances match gcd of minors; RP^2 H_1 torsion {2}")
