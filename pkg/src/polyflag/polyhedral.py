"""Polyhedral products Z_L(A,B) over finite cell pairs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .errors import InputError
from .homology import CellComplex, homology, leibniz_boundary
from .mirrors import MirroredComplex
from .simplicial import SimplicialComplex, full_subcomplex, is_conelike, missing_face


@dataclass(frozen=True)
class CellPair:
    """(A, B): a connected cell complex and a nonempty closed subcomplex."""

    ambient: CellComplex
    sub: frozenset

    def __post_init__(self):
        if not self.sub:
            raise InputError("the subcomplex of a pair must be nonempty")
        if any(c not in self.ambient for c in self.sub):
            raise InputError("subcomplex mentions cells outside the ambient complex")
        if not self.ambient.is_closed(self.sub):
            raise InputError("subcomplex of a pair is not closed")
        if not self.ambient.is_connected():
            raise InputError("ambient complex of a pair must be connected")

    def relative_cells(self) -> list:
        return [c for c in self.ambient.keys() if c not in self.sub]

    def sub_cells(self) -> list:
        return [c for c in self.ambient.keys() if c in self.sub]

    def basepoint(self):
        """Lexicographically first 0-cell of the subcomplex."""
        return min((c for c in self.ambient.cells[0] if c in self.sub), key=repr)

    def to_json(self) -> dict:
        keys = {c: k for k, c in enumerate(self.ambient.keys())}
        return {"ambient": self.ambient.to_json(), "sub": sorted(keys[c] for c in self.sub)}

    @classmethod
    def from_json(cls, data) -> "CellPair":
        try:
            A = CellComplex.from_json(data["ambient"])
            keys = A.keys()
            return cls(A, frozenset(keys[int(k)] for k in data["sub"]))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed pair JSON: {exc}") from exc


# fixtures -------------------------------------------------------------------


def interval_pair() -> CellPair:
    """([0,1], {1}) with cells '0', '1' and the edge 'I' = 1 - 0."""
    A = CellComplex.build([("0", 0, {}), ("1", 0, {}), ("I", 1, {"1": 1, "0": -1})])
    return CellPair(A, frozenset({"1"}))


def disk1_pair(subdivided: bool = False) -> CellPair:
    """(D^1, S^0) on [-1, 1].

    The default has three cells.  ``subdivided`` adds the midpoint '0', giving
    the cone on S^0 with edges '-' = -1 - 0 and '+' = +1 - 0.
    """
    if subdivided:
        A = CellComplex.build([("0", 0, {}), ("-1", 0, {}), ("+1", 0, {}),
                               ("-", 1, {"-1": 1, "0": -1}), ("+", 1, {"+1": 1, "0": -1})])
    else:
        A = CellComplex.build([("-1", 0, {}), ("+1", 0, {}), ("D", 1, {"+1": 1, "-1": -1})])
    return CellPair(A, frozenset({"-1", "+1"}))


def disk2_pair() -> CellPair:
    """(D^2, S^1) with vertices p, q, edges a, b from p to q and the 2-cell e = a - b."""
    A = CellComplex.build([("p", 0, {}), ("q", 0, {}),
                           ("a", 1, {"q": 1, "p": -1}), ("b", 1, {"q": 1, "p": -1}),
                           ("e", 2, {"a": 1, "b": -1})])
    return CellPair(A, frozenset({"p", "q", "a", "b"}))


def cone_pair(E: Sequence) -> CellPair:
    """(Cone E, E): apex ('*',), base points ('pt', e) and edges ('edge', e) = pt - apex."""
    E = list(E)
    if not E:
        raise InputError("cone on an empty set")
    items = [(("*",), 0, {})] + [(("pt", e), 0, {}) for e in E]
    items += [(("edge", e), 1, {("pt", e): 1, ("*",): -1}) for e in E]
    return CellPair(CellComplex.build(items), frozenset(("pt", e) for e in E))


# products -------------------------------------------------------------------


def _pairs_list(L: SimplicialComplex, pairs) -> list:
    if isinstance(pairs, CellPair):
        return [pairs] * len(L.vertices)
    if isinstance(pairs, Mapping):
        if set(pairs) != set(L.vertices):
            raise InputError(f"pairs indexed by {sorted(pairs)} but L has vertices {list(L.vertices)}")
        return [pairs[v] for v in L.vertices]
    pairs = list(pairs)
    if len(pairs) != len(L.vertices):
        raise InputError(f"{len(pairs)} pairs for {len(L.vertices)} vertices")
    return pairs


def support(L: SimplicialComplex, pairs, coords) -> tuple:
    ps = _pairs_list(L, pairs)
    return tuple(v for v, p, c in zip(L.vertices, ps, coords) if c not in p.sub)


def polyhedral_product(L: SimplicialComplex, pairs, max_cells: int | None = None) -> CellComplex:
    """Z_L(A,B) as a cell complex.

    Cells are coordinate tuples (one cell of A(i) per vertex of L, in vertex
    order) whose support spans a simplex of L; the label of a cell is its
    support.  ``pairs`` may be one CellPair used at every vertex, a list in
    vertex order, or a mapping from vertices.
    """
    from .errors import CapExceeded
    ps = _pairs_list(L, pairs)
    factors = [p.ambient for p in ps]
    rel = [p.relative_cells() for p in ps]
    sub = [p.sub_cells() for p in ps]
    pos = {v: k for k, v in enumerate(L.vertices)}
    order = [{c: k for k, c in enumerate(f.keys())} for f in factors]
    items, labels = [], {}
    for J in [()] + L.sorted_simplices():
        Jp = {pos[v] for v in J}
        choices = [rel[k] if k in Jp else sub[k] for k in range(len(ps))]
        for coords in product(*choices):
            d = sum(factors[k].dim(c) for k, c in enumerate(coords))
            items.append((coords, d, leibniz_boundary(factors, coords)))
            labels[coords] = J
            if max_cells is not None and len(items) > max_cells:
                raise CapExceeded(f"polyhedral product exceeds {max_cells} cells")
    items.sort(key=lambda t: (t[1], [order[k][c] for k, c in enumerate(t[0])]))
    return CellComplex.build(items, labels, check=False)


def cells_with_support(L: SimplicialComplex, pairs, J) -> int:
    """prod_{i in J} |A(i) - B(i)| * prod_{i not in J} |B(i)|."""
    ps = _pairs_list(L, pairs)
    out = 1
    for v, p in zip(L.vertices, ps):
        out *= len(p.relative_cells()) if v in J else len(p.sub)
    return out


def chamber(L: SimplicialComplex) -> CellComplex:
    """Z_L([0,1], 1)."""
    return polyhedral_product(L, interval_pair())


def chamber_mirrored(L: SimplicialComplex) -> MirroredComplex:
    """The cubical chamber with mirror i the face x_i = 0 (its nerve is L)."""
    Z = chamber(L)
    mirrors = {v: frozenset(c for c in Z.keys() if c[k] == "0") for k, v in enumerate(L.vertices)}
    return MirroredComplex(Z, tuple(L.vertices), mirrors)


def real_toric(L: SimplicialComplex, subdivided: bool = False) -> CellComplex:
    """Z_L(D^1, S^0); see ``disk1_pair`` for the two interval models."""
    return polyhedral_product(L, disk1_pair(subdivided))


_FLIP = {"-1": "+1", "+1": "-1", "D": "D", "0": "0", "-": "+", "+": "-"}


def toric_reflection(Z: CellComplex, k: int) -> dict:
    """The action of the k-th generator of (C_2)^I on Z_L(D^1,S^0): negate coordinate k."""
    return {c: c[:k] + (_FLIP[c[k]],) + c[k + 1:] for c in Z.keys()}


def toric_orbits(Z: CellComplex, rank: int) -> list:
    """Orbits of the (C_2)^I action on the cells."""
    seen, orbits = set(), []
    gens = [toric_reflection(Z, k) for k in range(rank)]
    for c in Z.keys():
        if c in seen:
            continue
        orb, stack = {c}, [c]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        orbits.append(orb)
    return orbits


def moment_angle(L: SimplicialComplex) -> CellComplex:
    """Z_L(D^2, S^1) with the five-cell disk of ``disk2_pair``."""
    return polyhedral_product(L, disk2_pair())


def cone_pair_product(L: SimplicialComplex, E) -> CellComplex:
    """Z_L(Cone E, E); ``E`` is a list (vertex order) or mapping of finite sets."""
    if isinstance(E, Mapping):
        E = [E[v] for v in L.vertices]
    return polyhedral_product(L, [cone_pair(e) for e in E])


def building_to_cone_map(L: SimplicialComplex, U: CellComplex) -> dict:
    """Cell map from U(prod E_i, cubical chamber of L) to Z_L(Cone E, E).

    A cell (R, c) goes to the tuple whose k-th entry is the base point R_k when
    c_k = 1, the cone edge to R_k when c_k = I, and the apex when c_k = 0.
    """
    out = {}
    for R, c in U.keys():
        coords = []
        for k, x in enumerate(c):
            if x == "1":
                coords.append(("pt", R[k]))
            elif x == "I":
                coords.append(("edge", R[k]))
            else:
                coords.append(("*",))
        out[(R, c)] = tuple(coords)
    return out


# retraction -----------------------------------------------------------------


@dataclass
class Retraction:
    """Chain maps r: C(Z_L) -> C(Z_L') and i: C(Z_L') -> C(Z_L)."""

    Z: CellComplex
    Zsub: CellComplex
    r: dict      # cell of Z -> cell of Zsub or None (the zero chain)
    i: dict      # cell of Zsub -> cell of Z

    def is_chain_map_r(self) -> bool:
        for c in self.Z.keys():
            lhs: dict = {}
            if self.r[c] is not None:
                lhs = dict(self.Zsub.boundary_of(self.r[c]))
            rhs: dict = {}
            for f, e in self.Z.boundary_of(c).items():
                if self.r[f] is not None:
                    rhs[self.r[f]] = rhs.get(self.r[f], 0) + e
            if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                return False
        return True

    def is_chain_map_i(self) -> bool:
        for c in self.Zsub.keys():
            lhs = self.Z.boundary_of(self.i[c])
            rhs = {self.i[f]: e for f, e in self.Zsub.boundary_of(c).items()}
            if lhs != rhs:
                return False
        return True

    def is_retraction(self) -> bool:
        return all(self.r[self.i[c]] == c for c in self.Zsub.keys())


def retraction_to_full_subcomplex(L: SimplicialComplex, pairs, subset, basepoints=None) -> Retraction:
    ps = _pairs_list(L, pairs)
    subset = set(subset)
    Lsub = full_subcomplex(L, subset)
    keep = [k for k, v in enumerate(L.vertices) if v in subset]
    drop = [k for k, v in enumerate(L.vertices) if v not in subset]
    base = {}
    for k in drop:
        v = L.vertices[k]
        b = (basepoints or {}).get(v, ps[k].basepoint())
        if b not in ps[k].sub or ps[k].ambient.dim(b) != 0:
            raise InputError(f"basepoint {b!r} is not a 0-cell of B({v})")
        base[k] = b
    Z = polyhedral_product(L, ps)
    Zsub = polyhedral_product(Lsub, [ps[k] for k in keep])
    r = {}
    for c in Z.keys():
        if all(ps[k].ambient.dim(c[k]) == 0 for k in drop):
            r[c] = tuple(c[k] for k in keep)
        else:
            r[c] = None
    i = {}
    for c in Zsub.keys():
        full = [None] * len(ps)
        for k, x in zip(keep, c):
            full[k] = x
        for k in drop:
            full[k] = base[k]
        i[c] = tuple(full)
    return Retraction(Z, Zsub, r, i)


# asphericity hypotheses -----------------------------------------------------


def asphericity_report(L: SimplicialComplex, metadata: Mapping) -> dict:
    """Verdicts on the three hypotheses for asphericity of Z_L(A,B).

    (i) and (ii) come from caller declarations; (ii) is only required at
    vertices that are not conelike; (iii) is the flag test.
    """
    missing = [v for v in L.vertices if v not in metadata]
    if missing:
        raise InputError(f"no metadata for vertices {missing}")
    bad_i = [v for v in L.vertices if not metadata[v].get("aspherical", False)]
    bad_ii = [v for v in L.vertices
              if not is_conelike(L, v) and not metadata[v].get("aspherical_pair", False)]
    witness = missing_face(L)
    conds = {
        "(i)": {"verdict": "PASS" if not bad_i else "FAIL", "witness": bad_i or None},
        "(ii)": {"verdict": "PASS" if not bad_ii else "FAIL", "witness": bad_ii or None,
                 "exempt_conelike": [v for v in L.vertices if is_conelike(L, v)]},
        "(iii)": {"verdict": "PASS" if witness is None else "FAIL",
                  "witness": list(witness) if witness is not None else None},
    }
    overall = all(c["verdict"] == "PASS" for c in conds.values())
    return {"conditions": conds, "verdict": "PASS" if overall else "FAIL",
            "basis": "certified relative to declared metadata"}


def betti_summand_check(R: Retraction) -> bool:
    """Betti numbers of Z_L' are bounded by those of Z_L."""
    b = homology(R.Z).betti
    bs = homology(R.Zsub).betti
    return all(x <= (b[d] if d < len(b) else 0) for d, x in enumerate(bs))
