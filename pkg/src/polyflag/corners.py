"""Corners over I(n), pullbacks along colorings, cubical links and manifold certificates."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import CapExceeded, CheckFailed, InputError
from .homology import CellComplex, homology_of_chain_complex, is_acyclic
from .mirrors import MirroredComplex, mirror_intersection, nerve_of_mirrors
from .polyhedral import CellPair, chamber, interval_pair
from .simplicial import (SimplicialComplex, SimplicialMap, is_coloring, link, missing_face)

DEFAULT_CUBE_CAP = 10


@dataclass(frozen=True)
class CornerStructure:
    base: MirroredComplex

    @property
    def n(self) -> int:
        return len(self.base.mirror_index) - 1


def _empty_intersection_witness(X: MirroredComplex):
    idx = list(X.mirror_index)
    for k in range(1, len(idx) + 1):
        for J in combinations(idx, k):
            if not mirror_intersection(X, J):
                return J
    return None


def make_corner(X: MirroredComplex) -> CornerStructure:
    """Validate a corner: mirror index {0..n}, all intersections nonempty, connected."""
    if tuple(sorted(X.mirror_index)) != tuple(range(len(X.mirror_index))):
        raise InputError(f"mirror index must be 0..n, got {list(X.mirror_index)}")
    if not mirror_intersection(X, X.mirror_index):
        J = _empty_intersection_witness(X)
        raise CheckFailed(f"empty mirror intersection X_J for J = {list(J)}", witness=list(J))
    if not X.space.is_connected():
        raise CheckFailed("base space is disconnected")
    return CornerStructure(X)


def cube(n_factors: int) -> CellComplex:
    """[0,1]^k with coordinate cells '0', '1', 'I'."""
    I = interval_pair().ambient
    from .homology import product_complex
    return product_complex([I] * n_factors)


def cube_corner(n: int, convention: str = "one-face", cap: int = DEFAULT_CUBE_CAP) -> CornerStructure:
    """The (n+1)-cube with mirror i the face x_i = 1 ("one-face") or x_i = 0 ("zero-face")."""
    if n < 0:
        raise InputError("n must be non-negative")
    if n > cap:
        raise CapExceeded(f"cube dimension {n + 1} exceeds cap {cap + 1}")
    if convention not in ("one-face", "zero-face"):
        raise InputError(f"unknown convention {convention!r}")
    val = "1" if convention == "one-face" else "0"
    Q = cube(n + 1)
    mirrors = {i: frozenset(c for c in Q.keys() if c[i] == val) for i in range(n + 1)}
    return make_corner(MirroredComplex(Q, tuple(range(n + 1)), mirrors))


def product_corner(pairs: Sequence[CellPair]) -> CornerStructure:
    """prod A(i) with mirror i = B(i) x prod_{j != i} A(j)."""
    from .homology import product_complex
    P = product_complex([p.ambient for p in pairs])
    mirrors = {i: frozenset(c for c in P.keys() if c[i] in p.sub) for i, p in enumerate(pairs)}
    return make_corner(MirroredComplex(P, tuple(range(len(pairs))), mirrors))


def colored_chamber(N: SimplicialComplex, iota: SimplicialMap) -> MirroredComplex:
    """The cubical chamber of N with mirror i the union of the faces x_e = 0 over e with iota(e) = i."""
    if not is_coloring(iota) or iota.domain != N:
        raise InputError("iota must be a coloring of N")
    Z = chamber(N)
    n = len(iota.codomain.vertices)
    mirrors = {i: frozenset(c for c in Z.keys()
                            if any(x == "0" and iota.vertex_map[e] == i for e, x in zip(N.vertices, c)))
               for i in range(n)}
    return MirroredComplex(Z, tuple(range(n)), mirrors)


# pullback ---------------------------------------------------------------------


def pullback(f: SimplicialMap, X, require_corner: bool = True) -> CellComplex:
    """f*(X) for a coloring f: L -> Delta^n and a mirrored complex over {0..n}.

    Cells are pairs (J, c) where c is a cell of X and J is the simplex of L
    (possibly empty) with f(J) equal to the complement of I(c); these are the
    cells of the pieces (J, X_{f(J)-complement}) after the identifications.
    """
    if isinstance(X, CornerStructure):
        X = X.base
    elif require_corner:
        X = make_corner(X).base
    if not is_coloring(f):
        raise InputError("f is not a coloring")
    n1 = len(f.codomain.vertices)
    if tuple(sorted(X.mirror_index)) != tuple(sorted(f.codomain.vertices)) or len(X.mirror_index) != n1:
        raise InputError("mirror index does not match the codomain of the coloring")
    L = f.domain
    everything = frozenset(X.mirror_index)
    by_colors: dict = {}
    for J in [()] + L.sorted_simplices():
        by_colors.setdefault(frozenset(f.vertex_map[v] for v in J), []).append(J)
    types = X.types()

    def face_of(J, colors):
        return tuple(v for v in J if f.vertex_map[v] in colors)

    items = []
    for d, cs in enumerate(X.space.cells):
        for c in cs:
            comp = everything - types[c]
            bd_c = X.space.boundary_of(c)
            for J in by_colors.get(comp, []):
                bd = {}
                for g, e in bd_c.items():
                    key = (face_of(J, everything - types[g]), g)
                    bd[key] = bd.get(key, 0) + e
                items.append(((J, c), d, bd))
    return CellComplex.build(items, check=False)


def pullback_to_chamber_map(f: SimplicialMap, Y: CellComplex) -> dict:
    """Cell map f*(cube, one-face mirrors) -> Z_L([0,1],1).

    (J, c) goes to the tuple with entry c_{f(v)} at vertices v of J and '1' elsewhere.
    """
    L = f.domain
    out = {}
    for J, c in Y.keys():
        Js = set(J)
        out[(J, c)] = tuple(c[f.vertex_map[v]] if v in Js else "1" for v in L.vertices)
    return out


def pullback_to_basic_construction_map(Y: CellComplex, cosets: Mapping) -> dict:
    """Cell map f*(X) -> U(W,X) when L is the Coxeter complex of W.

    ``cosets`` is the simplex -> (types, representative) table produced by
    ``coxeter_complex``; the empty simplex is the whole group (identity coset).
    """
    out = {}
    for J, c in Y.keys():
        rep = 0 if not J else cosets[J][1]
        out[(J, c)] = (rep, c)
    return out


# cubical links ------------------------------------------------------------------


def cubical_defect(Y: CellComplex):
    """The first cell that is not a combinatorial cube (2k facets, 2^k vertices), or None."""
    for d, cs in enumerate(Y.cells):
        if d == 0:
            continue
        for c in cs:
            bd = Y.boundary_of(c)
            if len(bd) != 2 * d or any(abs(x) != 1 for x in bd.values()):
                return c
            if len(Y.vertices_of(c)) != 2 ** d:
                return c
    return None


def _upper_cells(Y: CellComplex, F) -> list:
    """Cells having F in their closure (excluding F), in cell order."""
    st = Y.star(F)
    st.discard(F)
    return sorted(st, key=Y.index.__getitem__)


def cubical_face_link(Y: CellComplex, F, check: bool = True):
    """Link of a face in a cube complex.

    Vertices of the link are the cubes of dimension dim F + 1 containing F
    (numbered in cell order); each cube Q containing F gives the simplex of
    such cubes lying in Q.  Returns ``(link, vertex_cells)``.
    Raises CheckFailed if two cubes give the same vertex set.
    """
    if check:
        bad = cubical_defect(Y)
        if bad is not None:
            raise CheckFailed(f"cell {bad!r} is not a cube", witness=bad)
    dF = Y.dim(F)
    ups = _upper_cells(Y, F)
    vcells = [c for c in ups if Y.dim(c) == dF + 1]
    vid = {c: k for k, c in enumerate(vcells)}
    seen: dict = {}
    simplices = []
    for Q in ups:
        cl = Y.closure([Q])
        s = tuple(sorted(vid[c] for c in vcells if c in cl))
        if len(s) != Y.dim(Q) - dF:
            raise CheckFailed(f"cube {Q!r} meets the face in a non-cubical way", witness=Q)
        if s in seen:
            raise CheckFailed(f"cubes {seen[s]!r} and {Q!r} share their link vertices: link is not simplicial",
                              witness=[seen[s], Q])
        seen[s] = Q
        simplices.append(s)
    try:
        K = SimplicialComplex.from_simplices(range(len(vcells)), simplices)
    except InputError as exc:
        raise CheckFailed(f"link of {F!r} is not a simplicial complex: {exc}") from exc
    return K, vcells


def cubical_vertex_link(Y: CellComplex, v) -> SimplicialComplex:
    if v not in Y or Y.dim(v) != 0:
        raise InputError(f"{v!r} is not a 0-cell")
    return cubical_face_link(Y, v)[0]


def gromov_check(Y: CellComplex) -> dict:
    """Flag test of every vertex link; failing vertices carry a missing simplex as witness."""
    bad = cubical_defect(Y)
    if bad is not None:
        raise CheckFailed(f"cell {bad!r} is not a cube", witness=bad)
    results = []
    for v in (Y.cells[0] if Y.cells else []):
        K, vcells = cubical_face_link(Y, v, check=False)
        w = missing_face(K)
        entry = {"vertex": v, "flag": w is None}
        if w is not None:
            entry["witness"] = [vcells[k] for k in w]
            entry["witness_link"] = K
        results.append(entry)
    ok = all(r["flag"] for r in results)
    return {"verdict": "PASS" if ok else "FAIL", "vertices": results}


def link_join_decomposition(Y: CellComplex, f: SimplicialMap, N: SimplicialComplex, F) -> dict:
    """Compare the link of a face of f*(K(N)) with Lk(J, L) * Lk(Supp F, N).

    ``Y`` must be the pullback of ``colored_chamber(N, iota)``, so its cells are
    (J, c) with c a coordinate tuple over the vertices of N.  A link vertex is
    matched to ('L', v) when it adds the vertex v to J and to ('N', e) when it
    raises coordinate e from 1 to I.
    """
    J, c = F
    if not isinstance(c, tuple) or len(c) != len(N.vertices):
        raise InputError("Y does not carry chamber labels of N")
    L = f.domain
    supp = tuple(e for e, x in zip(N.vertices, c) if x != "1")
    lkL = link(L, J)
    lkN = link(N, supp)
    K, vcells = cubical_face_link(Y, F)
    tag = {}
    for k, (J2, c2) in enumerate(vcells):
        if J2 != J:
            (v,) = set(J2) - set(J)
            tag[k] = ("L", v)
        else:
            (e,) = [e for e, x, y in zip(N.vertices, c, c2) if x != y]
            tag[k] = ("N", e)
    got = {frozenset(tag[k] for k in s) for s in K.simplices}
    want = set()
    for a in [()] + list(lkL.simplices):
        for b in [()] + list(lkN.simplices):
            if a or b:
                want.add(frozenset([("L", v) for v in a] + [("N", e) for e in b]))
    return {"link_L": lkL, "link_N": lkN, "link": K, "isomorphic": got == want}


# reports ------------------------------------------------------------------------


def corner_conditions_report(X, declared_aspherical: bool, cover_data: MirroredComplex | None = None) -> dict:
    if isinstance(X, CornerStructure):
        X = X.base
    conds = {"(i)'": {"verdict": "PASS" if declared_aspherical else "FAIL", "source": "declaration"}}
    if cover_data is None:
        conds["(ii)'"] = {"verdict": "UNKNOWN"}
        conds["(iii)'"] = {"verdict": "UNKNOWN"}
        basis = "no cover data supplied"
    else:
        if len(cover_data.mirror_index) < len(X.mirror_index):
            raise InputError("cover data has fewer mirrors than the corner")
        bad = None
        nerve = nerve_of_mirrors(cover_data)
        for s in nerve.sorted_simplices():
            sub = cover_data.space.subcomplex(mirror_intersection(cover_data, s))
            if not is_acyclic(sub):
                bad = list(s)
                break
        w = missing_face(nerve)
        conds["(ii)'"] = {"verdict": "PASS" if bad is None else "FAIL", "witness": bad}
        conds["(iii)'"] = {"verdict": "PASS" if w is None else "FAIL", "witness": list(w) if w else None}
        basis = "relative to supplied cover data"
    verdicts = [c["verdict"] for c in conds.values()]
    overall = "FAIL" if "FAIL" in verdicts else ("UNKNOWN" if "UNKNOWN" in verdicts else "PASS")
    return {"conditions": conds, "verdict": overall, "basis": basis}


def local_homology(Y: CellComplex, sigma):
    """Homology of the chain complex spanned by the cells containing sigma.

    This is H_*(Y, Y - x) for x interior to sigma.
    """
    cells = [sigma] + _upper_cells(Y, sigma)
    top = max(Y.dim(c) for c in cells)
    by_dim = [[c for c in cells if Y.dim(c) == d] for d in range(top + 1)]
    pos = [{c: k for k, c in enumerate(cs)} for cs in by_dim]
    rows = {}
    for d in range(1, top + 1):
        rd = {}
        for k, c in enumerate(by_dim[d]):
            row = {pos[d - 1][g]: e for g, e in Y.boundary_of(c).items() if g in pos[d - 1]}
            if row:
                rd[k] = row
        rows[d] = rd
    return homology_of_chain_complex([len(cs) for cs in by_dim], rows)


def closed_manifold_certificate(Y: CellComplex, n: int) -> dict:
    """Homology-manifold certificate for a closed n-dimensional complex."""
    if Y.dimension != n:
        raise InputError(f"complex has dimension {Y.dimension}, expected {n}")
    top = set(Y.cells[n])
    for c in Y.keys():
        if Y.dim(c) < n and not any(u in top for u in _upper_cells(Y, c)):
            raise InputError(f"complex is not pure: {c!r} lies in no {n}-cell")
    checks = {}
    cof: dict = {c: 0 for c in (Y.cells[n - 1] if n >= 1 else [])}
    for c in Y.cells[n]:
        for g in Y.boundary_of(c):
            cof[g] += 1
    bad = [(g, k) for g, k in cof.items() if k != 2]
    checks["pseudomanifold"] = {"ok": not bad, "witness": ({"cell": bad[0][0], "cofaces": bad[0][1]} if bad else None)}
    checks["connected"] = {"ok": Y.is_connected()}
    bad_link = None
    if not bad:
        for c in Y.keys():
            h = local_homology(Y, c)
            betti = h.betti + [0] * (n + 1 - len(h.betti))
            if any(h.torsion) or betti[:n + 1] != [0] * n + [1] or any(betti[n + 1:]):
                bad_link = c
                break
    checks["local_homology"] = {"ok": bad_link is None and not bad, "witness": bad_link}
    ok = all(v["ok"] for v in checks.values())
    return {"verdict": "PASS" if ok else "FAIL", "checks": checks, "basis": "homology-manifold certificate"}
