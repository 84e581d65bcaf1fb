"""Cell complexes with integer boundaries, Smith normal form and homology.

Everything is exact: coefficients are Python integers and the elimination in
``smith_normal_form`` never leaves the integers.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import gcd
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError
from .simplicial import SimplicialComplex


class CellComplex:
    """Graded cells with signed incidence to the cells one dimension lower.

    ``cells[d]`` lists the keys of the d-cells (keys are unique across all
    dimensions) and ``boundary[d][k]`` maps the index of a (d-1)-cell to its
    incidence number in the boundary of ``cells[d][k]``.  ``labels`` holds
    optional per-cell provenance annotations.
    """

    def __init__(self, cells: Sequence[Sequence[Hashable]],
                 boundary: Sequence[Sequence[Mapping[int, int]]],
                 labels: Mapping | None = None, check: bool = True):
        self.cells = [list(c) for c in cells]
        while self.cells and not self.cells[-1]:
            self.cells.pop()
        self.boundary = [[dict(b) for b in bd] for bd in boundary[:len(self.cells)]]
        self.labels = dict(labels or {})
        self.index: dict = {}
        for d, cs in enumerate(self.cells):
            for k, key in enumerate(cs):
                if key in self.index:
                    raise InputError(f"duplicate cell id {key!r}")
                self.index[key] = (d, k)
        self._cofaces = None
        if check:
            self._validate()

    # construction ---------------------------------------------------------

    @classmethod
    def build(cls, items: Iterable, labels=None, check: bool = True) -> "CellComplex":
        """Build from ``(key, dim, {face_key: coeff})`` triples.

        Cells keep their relative order within each dimension.
        """
        by_dim: dict = defaultdict(list)
        for key, d, bd in items:
            by_dim[d].append((key, bd))
        top = max(by_dim, default=-1)
        cells = [[k for k, _ in by_dim.get(d, [])] for d in range(top + 1)]
        pos = [{k: i for i, k in enumerate(cs)} for cs in cells]
        boundary = []
        for d in range(top + 1):
            rows = []
            for key, bd in by_dim.get(d, []):
                row = {}
                for f, c in bd.items():
                    if d == 0 or f not in pos[d - 1]:
                        raise InputError(f"cell {key!r} has boundary cell {f!r} not of dimension {d - 1}")
                    if c:
                        i = pos[d - 1][f]
                        row[i] = row.get(i, 0) + c
                rows.append({i: c for i, c in row.items() if c})
            boundary.append(rows)
        return cls(cells, boundary, labels, check)

    def _validate(self):
        for d in range(2, len(self.cells)):
            below = self.boundary[d - 1]
            for k, bd in enumerate(self.boundary[d]):
                acc: dict = defaultdict(int)
                for i, c in bd.items():
                    for j, c2 in below[i].items():
                        acc[j] += c * c2
                if any(acc.values()):
                    raise InputError(f"boundary of boundary is nonzero at cell {self.cells[d][k]!r}")
        for d, bd in enumerate(self.boundary):
            n_below = len(self.cells[d - 1]) if d else 0
            for row in bd:
                if d == 0 and row:
                    raise InputError("0-cells cannot have a boundary")
                if any(i < 0 or i >= n_below for i in row):
                    raise InputError("incidence refers to a missing cell")

    # queries --------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list:
        return [len(c) for c in self.cells]

    def __len__(self) -> int:
        return sum(self.counts())

    def __contains__(self, key) -> bool:
        return key in self.index

    def __repr__(self):
        return f"CellComplex(counts={self.counts()})"

    def keys(self) -> list:
        return [k for cs in self.cells for k in cs]

    def dim(self, key) -> int:
        return self.index[key][0]

    def boundary_of(self, key) -> dict:
        d, k = self.index[key]
        if d == 0:
            return {}
        below = self.cells[d - 1]
        return {below[i]: c for i, c in self.boundary[d][k].items()}

    def facets_of(self, key) -> list:
        return list(self.boundary_of(key))

    def cofaces(self, key) -> list:
        if self._cofaces is None:
            co: dict = defaultdict(list)
            for d in range(1, len(self.cells)):
                below = self.cells[d - 1]
                for k, bd in enumerate(self.boundary[d]):
                    for i in bd:
                        co[below[i]].append(self.cells[d][k])
            self._cofaces = dict(co)
        return self._cofaces.get(key, [])

    def closure(self, keys: Iterable) -> set:
        out = set()
        stack = list(keys)
        while stack:
            k = stack.pop()
            if k in out:
                continue
            if k not in self.index:
                raise InputError(f"unknown cell {k!r}")
            out.add(k)
            stack.extend(self.boundary_of(k))
        return out

    def star(self, key) -> set:
        """All cells having ``key`` in their closure (including itself)."""
        out = {key}
        stack = [key]
        while stack:
            k = stack.pop()
            for c in self.cofaces(k):
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    def vertices_of(self, key) -> set:
        return {k for k in self.closure([key]) if self.index[k][0] == 0}

    def is_closed(self, keys) -> bool:
        keys = set(keys)
        return all(f in keys for k in keys for f in self.boundary_of(k))

    def subcomplex(self, keys) -> "CellComplex":
        keys = set(keys)
        if not self.is_closed(keys):
            raise InputError("cell set is not closed under faces")
        items = []
        for d, cs in enumerate(self.cells):
            for key in cs:
                if key in keys:
                    items.append((key, d, self.boundary_of(key)))
        return CellComplex.build(items, {k: v for k, v in self.labels.items() if k in keys}, check=False)

    def boundary_rows(self, d: int) -> dict:
        """Sparse transpose of the boundary map C_d -> C_{d-1} (row per d-cell)."""
        if d <= 0 or d >= len(self.cells):
            return {}
        return {k: dict(bd) for k, bd in enumerate(self.boundary[d]) if bd}

    def boundary_matrix(self, d: int) -> list:
        """Dense matrix of C_d -> C_{d-1}: rows are (d-1)-cells."""
        n_rows = len(self.cells[d - 1]) if 0 < d < len(self.cells) else 0
        n_cols = len(self.cells[d]) if 0 <= d < len(self.cells) else 0
        M = [[0] * n_cols for _ in range(n_rows)]
        if 0 < d < len(self.cells):
            for k, bd in enumerate(self.boundary[d]):
                for i, c in bd.items():
                    M[i][k] = c
        return M

    def connected_components(self) -> list:
        parent = {v: v for v in (self.cells[0] if self.cells else [])}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if len(self.cells) > 1:
            for key in self.cells[1]:
                vs = list(self.vertices_of(key))
                for v in vs[1:]:
                    a, b = find(vs[0]), find(v)
                    if a != b:
                        parent[max(a, b, key=repr)] = min(a, b, key=repr)
        comps: dict = defaultdict(list)
        for v in parent:
            comps[find(v)].append(v)
        return list(comps.values())

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    # serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cells": [[_jsonable(k) for k in cs] for cs in self.cells],
            "boundary": [[sorted([i, c] for i, c in bd.items()) for bd in rows] for rows in self.boundary],
        }

    @classmethod
    def from_json(cls, data) -> "CellComplex":
        try:
            cells = [[_hashable(k) for k in cs] for cs in data["cells"]]
            boundary = [[{int(i): int(c) for i, c in bd} for bd in rows] for rows in data["boundary"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed cell complex JSON: {exc}") from exc
        if len(boundary) != len(cells) or any(len(b) != len(c) for b, c in zip(boundary, cells)):
            raise InputError("cells and boundary lists have different shapes")
        return cls(cells, boundary)


def _jsonable(x):
    if isinstance(x, (tuple, list, frozenset)):
        return [_jsonable(y) for y in (sorted(x, key=repr) if isinstance(x, frozenset) else x)]
    return x


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def chain_complex_of_simplicial(L: SimplicialComplex) -> CellComplex:
    """One cell per nonempty simplex, keyed by the simplex tuple.

    Boundary uses alternating signs on the sorted vertex order.
    """
    items = []
    for s in L.sorted_simplices():
        bd = {} if len(s) == 1 else {s[:i] + s[i + 1:]: (-1) ** i for i in range(len(s))}
        items.append((s, len(s) - 1, bd))
    return CellComplex.build(items, check=False)


# ---------------------------------------------------------------------------
# Smith normal form


def _as_rows(M) -> dict:
    if isinstance(M, Mapping):
        return {r: {c: int(v) for c, v in row.items() if v} for r, row in M.items()}
    return {r: {c: int(v) for c, v in enumerate(row) if v} for r, row in enumerate(M)}


def _diagonal_entries(rows: dict) -> list:
    """Reduce a sparse integer matrix to diagonal form by unimodular row and
    column operations; return the absolute values of the nonzero pivots."""
    rows = {r: dict(cs) for r, cs in rows.items() if cs}
    cols: dict = defaultdict(set)
    for r, cs in rows.items():
        for c in cs:
            cols[c].add(r)

    def axpy(k, r, a):
        rk = rows[k]
        for j, x in rows[r].items():
            nv = rk.get(j, 0) + a * x
            if nv:
                if j not in rk:
                    cols[j].add(k)
                rk[j] = nv
            elif j in rk:
                del rk[j]
                cols[j].discard(k)
        if not rk:
            del rows[k]

    diag = []
    while rows:
        r = min(rows, key=lambda k: (len(rows[k]), min(abs(v) for v in rows[k].values())))
        row = rows[r]
        c = min(row, key=lambda j: (abs(row[j]), len(cols[j])))
        while True:
            v = rows[r][c]
            clean = True
            for k in list(cols[c]):
                if k == r:
                    continue
                q = rows[k][c] // v
                if q:
                    axpy(k, r, -q)
                if k in rows and c in rows[k]:
                    clean = False
            if not clean:
                r = min(cols[c], key=lambda k: (abs(rows[k][c]), len(rows[k])))
                continue
            row = rows[r]
            for j in list(row):
                if j == c:
                    continue
                nv = row[j] - (row[j] // v) * v
                if nv:
                    row[j] = nv
                    clean = False
                else:
                    del row[j]
                    cols[j].discard(r)
            if not clean:
                c = min((j for j in row if j != c), key=lambda j: (abs(row[j]), len(cols[j])))
                continue
            break
        diag.append(abs(rows[r][c]))
        del rows[r]
        del cols[c]
    return diag


def _invariant_factors(diag: list) -> list:
    ones = [d for d in diag if d == 1]
    rest = sorted(d for d in diag if d != 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a * b // g
    return ones + sorted(rest)


def smith_normal_form(M) -> tuple:
    """Nonzero elementary divisors d1 | d2 | ... and the rank of ``M``.

    ``M`` is a dense list of rows or a sparse ``{row: {col: value}}`` mapping.
    """
    divs = _invariant_factors(_diagonal_entries(_as_rows(M)))
    return divs, len(divs)


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyProfile:
    betti: list
    torsion: list = field(default_factory=list)
    reduced: bool = False

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}

    def is_trivial(self) -> bool:
        return not any(self.betti) and not any(self.torsion)

    def trimmed(self) -> tuple:
        """(betti, torsion) with trailing zero degrees removed; handy for comparisons."""
        b, t = list(self.betti), [list(x) for x in self.torsion]
        while b and not b[-1] and not t[-1]:
            b.pop()
            t.pop()
        return b, t


def homology_of_chain_complex(sizes: Sequence[int], rows_by_degree: Mapping[int, Mapping],
                              reduced: bool = False) -> HomologyProfile:
    """Homology of a free chain complex.

    ``sizes[d]`` is the rank of C_d and ``rows_by_degree[d]`` the sparse
    boundary C_d -> C_{d-1} with one row per d-chain basis element.
    """
    top = len(sizes) - 1
    ranks = [0] * (top + 2)
    tors = [[] for _ in range(top + 2)]
    for d in range(1, top + 1):
        divs, rk = smith_normal_form(rows_by_degree.get(d, {}))
        ranks[d] = rk
        tors[d - 1] = [x for x in divs if x > 1]
    betti = [sizes[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]
    if reduced and sizes and sizes[0] > 0:
        betti[0] -= 1
    return HomologyProfile(betti, tors[:top + 1], reduced)


def homology(C, reduced: bool = False) -> HomologyProfile:
    if isinstance(C, SimplicialComplex):
        C = chain_complex_of_simplicial(C)
    return homology_of_chain_complex(C.counts(), {d: C.boundary_rows(d) for d in range(1, C.dimension + 1)},
                                     reduced)


def euler_characteristic(C) -> int:
    if isinstance(C, SimplicialComplex):
        return C.euler_characteristic()
    return sum((-1) ** d * n for d, n in enumerate(C.counts()))


def is_acyclic(C) -> bool:
    """Vanishing reduced homology (a nonempty complex)."""
    if len(C) == 0:
        return False
    return homology(C, reduced=True).is_trivial()


def is_homology_sphere_profile(C, n: int) -> bool:
    """Reduced homology is Z in degree n and zero elsewhere.

    n = -1 means the empty complex.
    """
    if n == -1:
        return len(C) == 0
    h = homology(C, reduced=True)
    if n > len(h.betti) - 1:
        return False
    return all(b == (1 if d == n else 0) for d, b in enumerate(h.betti)) and not any(h.torsion)


def profile_is_sphere(h: HomologyProfile, n: int) -> bool:
    if n < 0:
        return all(b == 0 for b in h.betti) and not any(h.torsion)
    return (len(h.betti) > n and all(b == (1 if d == n else 0) for d, b in enumerate(h.betti))
            and not any(h.torsion))


def leibniz_boundary(factors: Sequence[CellComplex], coords: tuple) -> dict:
    """Boundary of a product cell: sum over positions of (-1)^(dims before) * face."""
    out: dict = {}
    acc = 0
    for pos, c in enumerate(coords):
        for f, e in factors[pos].boundary_of(c).items():
            face = coords[:pos] + (f,) + coords[pos + 1:]
            out[face] = out.get(face, 0) + (-1) ** acc * e
        acc += factors[pos].dim(c)
    return out


def product_complex(factors: Sequence[CellComplex], cell_filter=None, labels=None) -> CellComplex:
    """Cartesian product with the Leibniz boundary.

    ``cell_filter(coords)`` may restrict to a subcomplex; it must select a set
    closed under taking faces.
    """
    from itertools import product as iproduct

    items = []
    for coords in iproduct(*(f.keys() for f in factors)):
        if cell_filter is not None and not cell_filter(coords):
            continue
        d = sum(factors[i].dim(c) for i, c in enumerate(coords))
        items.append((coords, d, leibniz_boundary(factors, coords)))
    items.sort(key=lambda t: t[1])
    return CellComplex.build(items, labels, check=False)


def cell_isomorphism_signs(C1: CellComplex, C2: CellComplex, phi: Mapping) -> dict:
    """Check that ``phi`` (cell key -> cell key) is a graded isomorphism of cell complexes.

    Cells may be sent to a cell with reversed orientation; the returned dict
    gives the sign for every cell.  Raises CheckFailed otherwise.
    """
    from .errors import CheckFailed
    if C1.counts() != C2.counts():
        raise CheckFailed(f"cell counts differ: {C1.counts()} vs {C2.counts()}")
    if len(phi) != len(C1) or set(phi) != set(C1.keys()):
        raise CheckFailed("map is not defined on every cell")
    if set(phi.values()) != set(C2.keys()):
        raise CheckFailed("map is not onto the target cells")
    sign = {}
    for d, cs in enumerate(C1.cells):
        for c in cs:
            if C2.dim(phi[c]) != d:
                raise CheckFailed("dimension not preserved", witness=c)
            bd1 = C1.boundary_of(c)
            bd2 = C2.boundary_of(phi[c])
            if {phi[f] for f in bd1} != set(bd2):
                raise CheckFailed("boundary faces do not correspond", witness=c)
            eps = None
            for f, coef in bd1.items():
                e = bd2[phi[f]] * sign[f]
                if abs(e) != abs(coef):
                    raise CheckFailed("incidence numbers differ", witness=c)
                s = 1 if e == coef else -1
                if eps is None:
                    eps = s
                elif eps != s:
                    raise CheckFailed("orientations cannot be matched", witness=c)
            sign[c] = 1 if eps is None else eps
    return sign
