"""Finite abstract simplicial complexes and simplex-level combinatorics.

Simplices are stored explicitly as sorted tuples of integer vertex ids.  The
empty simplex is never stored, but every poset-level operation treats it as
the minimum element.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, InputError

Simplex = tuple  # sorted tuple of vertex ids

DEFAULT_SIMPLEX_CAP = 2 ** 20


def _sort_key(s):
    return (len(s), s)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A downward-closed family of nonempty simplices over integer vertices.

    ``labels`` optionally records provenance for each vertex (e.g. the
    simplex of ``L`` a barycenter came from); it takes no part in equality.
    """

    vertices: tuple
    simplices: frozenset
    labels: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InputError("duplicate vertex id")
        for s in self.simplices:
            for v in s:
                if v not in vs:
                    raise InputError(f"simplex {s} uses unknown vertex {v}")

    # construction ---------------------------------------------------------

    @classmethod
    def from_facets(cls, vertices: Iterable[int], facets: Iterable[Sequence[int]],
                    labels=None, cap: int = DEFAULT_SIMPLEX_CAP) -> "SimplicialComplex":
        vertices = tuple(sorted(vertices))
        vs = set(vertices)
        simplices: set = set()
        for facet in facets:
            f = tuple(sorted(facet))
            if len(set(f)) != len(f):
                raise InputError(f"duplicate vertex in facet {list(facet)}")
            for v in f:
                if v not in vs:
                    raise InputError(f"facet {list(facet)} uses unknown vertex {v}")
            if not f or f in simplices:
                continue
            for k in range(1, len(f) + 1):
                for face in combinations(f, k):
                    simplices.add(face)
                if len(simplices) > cap:
                    raise CapExceeded(f"more than {cap} simplices")
        for v in vertices:
            simplices.add((v,))
        return cls(vertices, frozenset(simplices), labels or {})

    @classmethod
    def from_simplices(cls, vertices, simplices, labels=None) -> "SimplicialComplex":
        """Build from an already downward-closed simplex family (checked)."""
        simplices = frozenset(tuple(sorted(s)) for s in simplices if len(s))
        simplices = simplices | {(v,) for v in vertices}
        for s in simplices:
            if len(s) > 1:
                for face in combinations(s, len(s) - 1):
                    if face not in simplices:
                        raise InputError(f"not downward closed: {s} lacks face {face}")
        return cls(tuple(sorted(vertices)), simplices, labels or {})

    # queries --------------------------------------------------------------

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.simplices

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.vertices, self.simplices))

    def __repr__(self):
        return f"SimplicialComplex(vertices={list(self.vertices)}, facets={[list(f) for f in self.facets()]})"

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def sorted_simplices(self) -> list:
        """All nonempty simplices, by dimension then lexicographically."""
        return sorted(self.simplices, key=_sort_key)

    def simplices_of_dim(self, d: int) -> list:
        return sorted(s for s in self.simplices if len(s) == d + 1)

    def f_vector(self) -> list:
        f = [0] * (self.dimension + 1)
        for s in self.simplices:
            f[len(s) - 1] += 1
        return f

    def facets(self) -> list:
        """Maximal simplices, sorted."""
        out = []
        for s in self.simplices:
            maximal = True
            for v in self.vertices:
                if v not in s and tuple(sorted(s + (v,))) in self.simplices:
                    maximal = False
                    break
            if maximal:
                out.append(s)
        return sorted(out, key=_sort_key)

    def edges(self) -> list:
        return self.simplices_of_dim(1)

    def neighbors(self, v) -> set:
        return {w for e in self.simplices if len(e) == 2 and v in e for w in e if w != v}

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for s in self.simplices:
            if len(s) == 2:
                a, b = s
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def poset(self, include_empty: bool = False) -> "Poset":
        """The face poset S(L), optionally with the empty simplex as minimum."""
        elems = self.sorted_simplices()
        if include_empty:
            elems = [()] + elems
        less = set()
        for a in elems:
            sa = set(a)
            for b in elems:
                if len(a) < len(b) and sa.issubset(b):
                    less.add((a, b))
        return Poset(tuple(elems), frozenset(less))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "facets": [list(f) for f in self.facets()]}

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        try:
            return cls.from_facets(data["vertices"], data["facets"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed complex JSON: {exc}") from exc


@dataclass(frozen=True)
class Poset:
    """Finite poset; ``less`` holds the full strict order relation."""

    elements: tuple
    less: frozenset

    @classmethod
    def from_relation(cls, elements, pairs) -> "Poset":
        elements = tuple(elements)
        idx = set(elements)
        rel = set()
        for a, b in pairs:
            if a not in idx or b not in idx:
                raise InputError(f"relation mentions unknown element {(a, b)}")
            rel.add((a, b))
        # transitive closure
        changed = True
        while changed:
            changed = False
            succ: dict = {}
            for a, b in rel:
                succ.setdefault(a, set()).add(b)
            for a, b in list(rel):
                for c in succ.get(b, ()):
                    if (a, c) not in rel:
                        rel.add((a, c))
                        changed = True
        for a, b in rel:
            if a == b:
                raise InputError(f"relation is not irreflexive at {a}")
        return cls(elements, frozenset(rel))

    def lt(self, a, b) -> bool:
        return (a, b) in self.less

    def up_set(self, a) -> "Poset":
        """The subposet of elements >= a."""
        keep = [x for x in self.elements if x == a or (a, x) in self.less]
        ks = set(keep)
        return Poset(tuple(keep), frozenset(p for p in self.less if p[0] in ks and p[1] in ks))


@dataclass(frozen=True)
class SimplicialMap:
    domain: SimplicialComplex
    codomain: SimplicialComplex
    vertex_map: Mapping

    def __post_init__(self):
        for v in self.domain.vertices:
            if v not in self.vertex_map:
                raise InputError(f"vertex {v} has no image")
        for s in self.domain.simplices:
            img = {self.vertex_map[v] for v in s}
            if img not in self.codomain:
                raise InputError(f"image of simplex {s} is not a simplex")

    def __call__(self, simplex):
        return tuple(sorted({self.vertex_map[v] for v in simplex}))

    def to_json(self) -> dict:
        return {"vertex_map": {str(k): v for k, v in sorted(self.vertex_map.items())}}


# ---------------------------------------------------------------------------
# standard complexes


def simplex(vertices: Iterable[int]) -> SimplicialComplex:
    vs = sorted(vertices)
    return SimplicialComplex.from_facets(vs, [vs] if vs else [])


def boundary_of_simplex(vertices: Iterable[int]) -> SimplicialComplex:
    vs = sorted(vertices)
    return SimplicialComplex.from_facets(vs, [c for c in combinations(vs, len(vs) - 1) if c])


def discrete(vertices: Iterable[int]) -> SimplicialComplex:
    vs = sorted(vertices)
    return SimplicialComplex.from_facets(vs, [])


def cycle_graph(n: int, start: int = 1) -> SimplicialComplex:
    vs = list(range(start, start + n))
    return SimplicialComplex.from_facets(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete_graph(vertices: Iterable[int]) -> SimplicialComplex:
    vs = sorted(vertices)
    return SimplicialComplex.from_facets(vs, list(combinations(vs, 2)))


def graph(vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> SimplicialComplex:
    return SimplicialComplex.from_facets(vertices, edges)


def projective_plane() -> SimplicialComplex:
    """The 6-vertex triangulation of RP^2 (vertices 0..5)."""
    facets = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
              (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
    return SimplicialComplex.from_facets(range(6), facets)


# ---------------------------------------------------------------------------
# operations


def one_skeleton(L: SimplicialComplex) -> SimplicialComplex:
    return SimplicialComplex(L.vertices, frozenset(s for s in L.simplices if len(s) <= 2), L.labels)


def _cliques(vertices, adj, cap=DEFAULT_SIMPLEX_CAP):
    out = []

    def extend(clique, candidates):
        for i, v in enumerate(candidates):
            c = clique + (v,)
            out.append(c)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} cliques")
            extend(c, [w for w in candidates[i + 1:] if w in adj[v]])

    extend((), sorted(vertices))
    return out


def clique_complex(g: SimplicialComplex, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """The flag complex whose simplices are the cliques of a graph."""
    if g.dimension >= 2:
        raise InputError("clique_complex expects a graph (no simplices of dimension >= 2)")
    return SimplicialComplex(g.vertices, frozenset(_cliques(g.vertices, g.adjacency(), cap)), g.labels)


def missing_face(L: SimplicialComplex):
    """A minimal clique of the 1-skeleton that is not a simplex, or None.

    Every proper face of the returned set is a simplex, so it witnesses the
    failure of flagness.
    """
    adj = L.adjacency()
    best = None
    for c in _cliques(L.vertices, adj):
        if c not in L.simplices and (best is None or _sort_key(c) < _sort_key(best)):
            best = c
    return best


def is_flag(L: SimplicialComplex) -> bool:
    """True iff every set of pairwise adjacent vertices spans a simplex."""
    # a minimal missing clique is its largest vertex added to a simplex
    adj = L.adjacency()
    up = {v: {w for w in adj[v] if w > v} for v in L.vertices}
    for s in L.simplices:
        if len(s) < 2:
            continue
        common = up[s[-1]]
        for u in s[:-1]:
            common = common & adj[u]
        for v in common:
            if s + (v,) not in L.simplices:
                return False
    return True


def order_complex(P: Poset) -> SimplicialComplex:
    """Flag(P): vertex k is ``P.elements[k]``; simplices are the chains."""
    idx = {p: k for k, p in enumerate(P.elements)}
    up: dict = {p: [] for p in P.elements}
    for a, b in P.less:
        up[a].append(b)
    chains = []

    def extend(chain, last):
        for b in up[last]:
            c = chain + (idx[b],)
            chains.append(tuple(sorted(c)))
            extend(c, b)

    for p in P.elements:
        chains.append((idx[p],))
        extend((idx[p],), p)
    return SimplicialComplex(tuple(range(len(P.elements))), frozenset(chains),
                             {k: p for k, p in enumerate(P.elements)})


def barycentric_subdivision(L: SimplicialComplex) -> SimplicialComplex:
    """Order complex of the nonempty simplices; vertex labels are the simplices."""
    return order_complex(L.poset())


def link(L: SimplicialComplex, sigma) -> SimplicialComplex:
    sigma = tuple(sorted(sigma))
    if sigma and sigma not in L.simplices:
        raise InputError(f"{list(sigma)} is not a simplex")
    ss = set(sigma)
    simps = []
    for t in L.simplices:
        if ss.isdisjoint(t) and tuple(sorted(t + sigma)) in L.simplices:
            simps.append(t)
    verts = sorted({v for t in simps for v in t})
    return SimplicialComplex(tuple(verts), frozenset(simps))


def join(L1: SimplicialComplex, L2: SimplicialComplex, relabel: bool = False):
    """Join of two complexes.

    With ``relabel=True`` the vertices of ``L2`` are shifted by
    ``max(L1.vertices) + 1`` and the pair ``(join, offset_map)`` is returned;
    otherwise the vertex sets must already be disjoint.
    """
    if relabel:
        off = (max(L1.vertices) + 1) if L1.vertices else 0
        shift = {v: v + off for v in L2.vertices}
        L2s = SimplicialComplex(tuple(shift[v] for v in L2.vertices),
                                frozenset(tuple(shift[v] for v in s) for s in L2.simplices))
        return join(L1, L2s), shift
    if set(L1.vertices) & set(L2.vertices):
        raise InputError("join factors share vertex ids")
    a = [()] + list(L1.simplices)
    b = [()] + list(L2.simplices)
    simps = {tuple(sorted(s + t)) for s in a for t in b if s or t}
    return SimplicialComplex(tuple(sorted(L1.vertices + L2.vertices)), frozenset(simps))


def cone(L: SimplicialComplex, apex: int | None = None) -> SimplicialComplex:
    if apex is None:
        apex = (max(L.vertices) + 1) if L.vertices else 0
    return join(L, simplex([apex]))


def full_subcomplex(L: SimplicialComplex, subset: Iterable[int]) -> SimplicialComplex:
    keep = set(subset)
    unknown = keep - set(L.vertices)
    if unknown:
        raise InputError(f"unknown vertices {sorted(unknown)}")
    return SimplicialComplex(tuple(sorted(keep)), frozenset(s for s in L.simplices if keep.issuperset(s)))


def relabel(L: SimplicialComplex, mapping: Mapping) -> SimplicialComplex:
    return SimplicialComplex(tuple(sorted(mapping[v] for v in L.vertices)),
                             frozenset(tuple(sorted(mapping[v] for v in s)) for s in L.simplices))


def is_nondegenerate(f: SimplicialMap) -> bool:
    return all(len(f(s)) == len(s) for s in f.domain.simplices)


def is_coloring(f: SimplicialMap) -> bool:
    """Nondegenerate and onto a full simplex."""
    cod = f.codomain
    if len(cod.simplices) != 2 ** len(cod.vertices) - 1:
        return False
    if set(f.vertex_map[v] for v in f.domain.vertices) != set(cod.vertices):
        return False
    return is_nondegenerate(f)


def is_conelike(L: SimplicialComplex, v) -> bool:
    if v not in L.vertices:
        raise InputError(f"unknown vertex {v}")
    return all((min(v, w), max(v, w)) in L.simplices for w in L.vertices if w != v)


def dimension_coloring(B: SimplicialComplex) -> SimplicialMap:
    """The coloring v -> dim(cell v is the barycenter of) of a barycentric subdivision."""
    n = max(len(s) for s in B.labels.values()) - 1
    return SimplicialMap(B, simplex(range(n + 1)), {v: len(B.labels[v]) - 1 for v in B.vertices})


def greedy_coloring(L: SimplicialComplex, colors: int | None = None) -> SimplicialMap:
    """A coloring onto Delta^{k-1} from a greedy proper coloring of the 1-skeleton.

    With ``colors`` the codomain is Delta^{colors-1}, which must be large enough.
    """
    adj = L.adjacency()
    color = {}
    for v in L.vertices:
        used = {color[w] for w in adj[v] if w in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    k = max(color.values(), default=-1) + 1
    if colors is not None:
        if colors < k:
            raise InputError(f"greedy coloring needs {k} colors, only {colors} allowed")
        k = colors
    return SimplicialMap(L, simplex(range(k)), color)


def identity_map(L: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(L, L, {v: v for v in L.vertices})
