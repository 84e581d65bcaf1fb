"""Mirror structures, the basic construction and rank-one building products."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

from .coxeter import FiniteGroupTable, coset_space
from .errors import InputError
from .homology import CellComplex
from .simplicial import SimplicialComplex, SimplicialMap, simplex


@dataclass(frozen=True)
class MirroredComplex:
    space: CellComplex
    mirror_index: tuple
    mirrors: Mapping  # index -> frozenset of cell keys

    def __post_init__(self):
        if len(set(self.mirror_index)) != len(self.mirror_index):
            raise InputError("mirror indices must be distinct")
        if set(self.mirrors) != set(self.mirror_index):
            raise InputError("mirrors must be given for exactly the mirror indices")
        for i, cells in self.mirrors.items():
            unknown = [c for c in cells if c not in self.space]
            if unknown:
                raise InputError(f"mirror {i} mentions unknown cells {unknown[:3]}")
            if not self.space.is_closed(cells):
                raise InputError(f"mirror {i} is not a closed subcomplex")

    def mirror_type(self, cell) -> frozenset:
        """I(c): the indices of the mirrors containing the cell."""
        return frozenset(i for i in self.mirror_index if cell in self.mirrors[i])

    def types(self) -> dict:
        member: dict = {c: [] for c in self.space.keys()}
        for i in self.mirror_index:
            for c in self.mirrors[i]:
                member[c].append(i)
        return {c: frozenset(v) for c, v in member.items()}

    def position(self, i) -> int:
        return self.mirror_index.index(i)

    def to_json(self) -> dict:
        out = self.space.to_json()
        keys = {c: k for k, c in enumerate(self.space.keys())}
        out["mirrors"] = {str(i): sorted(keys[c] for c in self.mirrors[i]) for i in self.mirror_index}
        return out

    @classmethod
    def from_json(cls, data) -> "MirroredComplex":
        space = CellComplex.from_json(data)
        keys = space.keys()
        try:
            raw = data["mirrors"]
            mirrors = {int(i): frozenset(keys[int(k)] for k in ids) for i, ids in raw.items()}
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed mirror JSON: {exc}") from exc
        return cls(space, tuple(sorted(mirrors)), mirrors)


def mirror_intersection(X: MirroredComplex, J) -> frozenset:
    J = list(J)
    for i in J:
        if i not in X.mirrors:
            raise InputError(f"unknown mirror index {i}")
    if not J:
        return frozenset(X.space.keys())
    return frozenset.intersection(*(frozenset(X.mirrors[i]) for i in J))


def mirror_union(X: MirroredComplex, J) -> frozenset:
    out: set = set()
    for i in J:
        if i not in X.mirrors:
            raise InputError(f"unknown mirror index {i}")
        out |= X.mirrors[i]
    return frozenset(out)


def nerve_of_mirrors(X: MirroredComplex) -> SimplicialComplex:
    """Vertices are the indices with nonempty mirror; J is a simplex iff X_J is nonempty."""
    simplices = set()
    for t in set(X.types().values()):
        ts = sorted(t)
        for k in range(1, len(ts) + 1):
            simplices.update(combinations(ts, k))
    verts = [i for i in X.mirror_index if X.mirrors[i]]
    return SimplicialComplex.from_simplices(verts, simplices)


def canonical_chamber(L: SimplicialComplex) -> MirroredComplex:
    """K(L): order complex of the simplices of L including the empty one.

    A cell is a chain of simplices listed by inclusion; mirror i consists of
    the chains all of whose members contain vertex i.
    """
    elements = [()] + L.sorted_simplices()
    ups: dict = {s: [t for t in elements if len(t) > len(s) and set(s) <= set(t)] for s in elements}
    chains = []

    def extend(chain):
        chains.append(chain)
        for t in ups[chain[-1]]:
            extend(chain + (t,))

    for s in elements:
        extend((s,))
    chains.sort(key=lambda c: (len(c), [elements.index(s) for s in c]))
    items = []
    for c in chains:
        bd = {} if len(c) == 1 else {c[:k] + c[k + 1:]: (-1) ** k for k in range(len(c))}
        items.append((c, len(c) - 1, bd))
    space = CellComplex.build(items, check=False)
    mirrors = {i: frozenset(c for c in chains if all(i in s for s in c)) for i in L.vertices}
    return MirroredComplex(space, tuple(L.vertices), mirrors)


def simplex_chamber(index: Sequence) -> MirroredComplex:
    """The simplex on ``index`` with mirror i the facet opposite vertex i.

    Cells are the nonempty vertex subsets; I(sigma) is the complement of sigma.
    """
    index = tuple(index)
    items = []
    for k in range(1, len(index) + 1):
        for s in combinations(index, k):
            bd = {} if k == 1 else {s[:j] + s[j + 1:]: (-1) ** j for j in range(k)}
            items.append((s, k - 1, bd))
    space = CellComplex.build(items, check=False)
    mirrors = {i: frozenset(s for s, _, _ in items if i not in s) for i in index}
    return MirroredComplex(space, index, mirrors)


def _check_index(table_index, X: MirroredComplex):
    if set(table_index) != set(X.mirror_index):
        raise InputError(f"mirror index {list(X.mirror_index)} does not match generator index {list(table_index)}")


def basic_construction(table: FiniteGroupTable, X: MirroredComplex) -> CellComplex:
    """U(W,X) for a finite Coxeter group given by its element table.

    Cells are keyed ``(w, c)`` where ``w`` is the index of the ShortLex-minimal
    element of the coset wW_{I(c)}; labels record ``(word of w, I(c), c)``.
    """
    _check_index(table.index, X)
    types = X.types()
    spaces: dict = {}

    def cosets(J):
        if J not in spaces:
            spaces[J] = coset_space(table, J)
        return spaces[J]

    items, labels = [], {}
    for d, cs in enumerate(X.space.cells):
        for c in cs:
            J = types[c]
            cs_ = cosets(J)
            bd_c = X.space.boundary_of(c)
            for rep in cs_.representatives:
                bd = {}
                for f, coef in bd_c.items():
                    sub = cosets(types[f])
                    key = (sub.representatives[sub.coset_of[rep]], f)
                    bd[key] = bd.get(key, 0) + coef
                items.append(((rep, c), d, bd))
                labels[(rep, c)] = (table.elements[rep], tuple(sorted(J, key=table.index.index)), c)
    return CellComplex.build(items, labels, check=False)


def basic_construction_count(table: FiniteGroupTable, X: MirroredComplex) -> int:
    """Sum over cells c of the index [W : W_{I(c)}]."""
    _check_index(table.index, X)
    total = 0
    sizes: dict = {}
    for c, J in X.types().items():
        if J not in sizes:
            sizes[J] = len(coset_space(table, J))
        total += sizes[J]
    return total


def quotient_to_chamber(U: CellComplex) -> dict:
    """The projection (w, c) -> c of a basic construction onto its chamber."""
    return {key: key[1] for key in U.keys()}


def coxeter_complex(table: FiniteGroupTable):
    """U(W, Delta) as a simplicial complex together with its type coloring.

    Vertex ids are assigned in order of (type position, coset representative).
    Returns ``(complex, coloring, cosets)`` where ``coloring`` maps onto the
    simplex on generator positions and ``cosets[simplex] = (T, rep)`` records
    that the simplex spanned by types T is the coset rep*W_{I-T}.
    """
    index = table.index
    n = len(index)
    spaces = {}
    for k in range(n):
        spaces[k] = coset_space(table, [index[j] for j in range(n) if j != k])
    vid = {}
    for k in range(n):
        for rep in spaces[k].representatives:
            vid[(k, rep)] = len(vid)
    simplices, cosets = set(), {}
    for size in range(1, n + 1):
        for T in combinations(range(n), size):
            cs = coset_space(table, [index[j] for j in range(n) if j not in T])
            for rep in cs.representatives:
                s = tuple(sorted(vid[(k, spaces[k].representatives[spaces[k].coset_of[rep]])] for k in T))
                simplices.add(s)
                cosets[s] = (T, rep)
    labels = {v: key for key, v in vid.items()}
    K = SimplicialComplex.from_simplices(range(len(vid)), simplices, labels=labels)
    coloring = SimplicialMap(K, simplex(range(n)), {v: key[0] for key, v in vid.items()})
    return K, coloring, cosets


# ---------------------------------------------------------------------------
# products of rank-one buildings


@dataclass(frozen=True)
class RankOneBuildingProduct:
    factors: tuple  # tuple of tuples of chamber labels

    def __post_init__(self):
        for k, E in enumerate(self.factors):
            if len(E) == 0:
                raise InputError(f"factor {k} is empty")
            if len(set(E)) != len(E):
                raise InputError(f"factor {k} has repeated labels")
            if len(E) == 1:
                warnings.warn(f"factor {k} has a single chamber; buildings need at least two", stacklevel=3)

    @classmethod
    def of(cls, factors) -> "RankOneBuildingProduct":
        return cls(tuple(tuple(E) for E in factors))

    @property
    def rank(self) -> int:
        return len(self.factors)

    def chambers(self) -> list:
        return list(product(*self.factors))

    def adjacent(self, c, d, i) -> bool:
        return all(c[j] == d[j] for j in range(self.rank) if j != i)

    def residue(self, chamber, J) -> tuple:
        """The J-residue of a chamber, written with None in the J coordinates."""
        return tuple(None if k in J else x for k, x in enumerate(chamber))

    def residues(self, J) -> list:
        return list(product(*([None] if k in J else E for k, E in enumerate(self.factors))))

    def to_json(self) -> dict:
        return {"factors": [list(E) for E in self.factors]}

    @classmethod
    def from_json(cls, data) -> "RankOneBuildingProduct":
        try:
            return cls.of(data["factors"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed building JSON: {exc}") from exc


def building_construction(B: RankOneBuildingProduct, X: MirroredComplex) -> CellComplex:
    """U(C,X): cells are (J-residue, c) with J = I(c), mirror k <-> factor k."""
    if B.rank != len(X.mirror_index):
        raise InputError(f"{B.rank} factors but {len(X.mirror_index)} mirrors")
    pos = {i: k for k, i in enumerate(X.mirror_index)}
    types = {c: frozenset(pos[i] for i in t) for c, t in X.types().items()}
    items = []
    for d, cs in enumerate(X.space.cells):
        for c in cs:
            bd_c = X.space.boundary_of(c)
            for R in B.residues(types[c]):
                bd = {}
                for f, coef in bd_c.items():
                    Jf = types[f]
                    key = (tuple(None if k in Jf else x for k, x in enumerate(R)), f)
                    bd[key] = bd.get(key, 0) + coef
                items.append(((R, c), d, bd))
    return CellComplex.build(items, check=False)
