"""Coxeter matrices and systems.

Finiteness of special subgroups is decided from the classification of finite
irreducible Coxeter diagrams, never by trying to enumerate.  Finite groups are
enumerated by coset enumeration over the trivial subgroup and then renumbered
so that element ``k`` carries the k-th ShortLex normal form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError
from .simplicial import SimplicialComplex, SimplicialMap, is_nondegenerate

INF = math.inf
DEFAULT_GROUP_CAP = 10 ** 5


@dataclass(frozen=True)
class CoxeterMatrix:
    index: tuple
    m: tuple  # m[a][b] for positions a, b in ``index``

    def __post_init__(self):
        n = len(self.index)
        if len(set(self.index)) != n:
            raise InputError("duplicate index in Coxeter matrix")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise InputError("Coxeter matrix must be square over its index set")
        for a in range(n):
            if self.m[a][a] != 1:
                raise InputError(f"diagonal entry at {self.index[a]} is {self.m[a][a]}, expected 1")
            for b in range(n):
                x = self.m[a][b]
                if x != self.m[b][a]:
                    raise InputError(f"asymmetric entries at ({self.index[a]}, {self.index[b]})")
                if a != b and not (x == INF or (isinstance(x, int) and x >= 2)):
                    raise InputError(f"off-diagonal entry {x} at ({self.index[a]}, {self.index[b]}) must be >= 2 or inf")

    def __call__(self, i, j):
        pos = self._pos
        return self.m[pos[i]][pos[j]]

    @property
    def _pos(self):
        return {v: k for k, v in enumerate(self.index)}

    def restrict(self, J) -> "CoxeterMatrix":
        J = [i for i in self.index if i in set(J)]
        return CoxeterMatrix(tuple(J), tuple(tuple(self(i, j) for j in J) for i in J))

    def is_right_angled(self) -> bool:
        n = len(self.index)
        return all(self.m[a][b] in (2, INF) for a in range(n) for b in range(n) if a != b)

    def to_json(self) -> dict:
        return {"index": list(self.index),
                "m": [["inf" if x == INF else x for x in row] for row in self.m]}

    @classmethod
    def from_json(cls, data) -> "CoxeterMatrix":
        try:
            m = tuple(tuple(INF if x in ("inf", "∞", None) else int(x) for x in row) for row in data["m"])
            index = tuple(data.get("index", range(len(m))))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Coxeter matrix JSON: {exc}") from exc
        return cls(index, m)


def validate(matrix, index=None) -> CoxeterMatrix:
    """Validate a square array (entries ints, or inf / 'inf')."""
    rows = tuple(tuple(INF if x in ("inf", INF, None) else x for x in row) for row in matrix)
    return CoxeterMatrix(tuple(index if index is not None else range(len(rows))), rows)


def right_angled(index: Sequence, edges: Iterable) -> CoxeterMatrix:
    index = tuple(index)
    es = {frozenset(e) for e in edges}
    return CoxeterMatrix(index, tuple(
        tuple(1 if i == j else (2 if frozenset((i, j)) in es else INF) for j in index) for i in index))


def induced_matrix(f: SimplicialMap, target: CoxeterMatrix) -> CoxeterMatrix:
    """m(i,j) = target(f(i), f(j)) on edges of the domain, inf off edges."""
    if not is_nondegenerate(f):
        raise InputError("induced Coxeter matrix needs a nondegenerate map")
    L = f.domain
    idx = L.vertices
    rows = []
    for i in idx:
        row = []
        for j in idx:
            if i == j:
                row.append(1)
            elif (min(i, j), max(i, j)) in L.simplices:
                row.append(target(f.vertex_map[i], f.vertex_map[j]))
            else:
                row.append(INF)
        rows.append(tuple(row))
    return CoxeterMatrix(idx, tuple(rows))


# ---------------------------------------------------------------------------
# classification

_EXCEPTIONAL_ORDERS = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400}


def _classify_component(M: CoxeterMatrix, comp: list):
    """Return (type name, order) for a connected diagram, or None if infinite."""
    n = len(comp)
    if n == 1:
        return "A1", 2
    edges = {}
    for a, b in combinations(comp, 2):
        x = M(a, b)
        if x != 2:
            if x == INF:
                return None
            edges[frozenset((a, b))] = x
    if n == 2:
        (x,) = edges.values()
        return ("A2" if x == 3 else f"I2({x})"), 2 * x
    if len(edges) != n - 1:
        return None  # contains a cycle
    deg = {v: 0 for v in comp}
    for e in edges:
        for v in e:
            deg[v] += 1
    labels = sorted(edges.values())
    if max(deg.values()) > 3 or sum(1 for d in deg.values() if d == 3) > 1:
        return None
    branch = [v for v, d in deg.items() if d == 3]
    if branch:
        if any(x != 3 for x in labels):
            return None
        c = branch[0]
        arms = []
        for start in (w for e in edges if c in e for w in e if w != c):
            length, prev, cur = 1, c, start
            while deg[cur] == 2:
                nxt = next(w for e in edges if cur in e for w in e if w not in (cur, prev))
                prev, cur = cur, nxt
                length += 1
            arms.append(length)
        arms.sort()
        if arms[:2] == [1, 1]:
            return f"D{n}", 2 ** (n - 1) * math.factorial(n)
        if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
            name = f"E{n}"
            return name, _EXCEPTIONAL_ORDERS[name]
        return None
    # a path
    ends = [v for v, d in deg.items() if d == 1]
    order = [ends[0]]
    prev = None
    while len(order) < n:
        cur = order[-1]
        nxt = next(w for e in edges if cur in e for w in e if w != cur and w != prev)
        prev = cur
        order.append(nxt)
    path_labels = [edges[frozenset((order[k], order[k + 1]))] for k in range(n - 1)]
    big = [(k, x) for k, x in enumerate(path_labels) if x != 3]
    if not big:
        return f"A{n}", math.factorial(n + 1)
    if len(big) > 1:
        return None
    k, x = big[0]
    at_end = k in (0, n - 2)
    if x == 4:
        if at_end:
            return f"B{n}", 2 ** n * math.factorial(n)
        if n == 4:
            return "F4", _EXCEPTIONAL_ORDERS["F4"]
        return None
    if x == 5 and at_end and n in (3, 4):
        name = f"H{n}"
        return name, _EXCEPTIONAL_ORDERS[name]
    return None


def diagram_components(M: CoxeterMatrix, J=None) -> list:
    J = list(M.index if J is None else [i for i in M.index if i in set(J)])
    seen, comps = set(), []
    for v in J:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in J:
                if b not in seen and M(a, b) != 2:
                    seen.add(b)
                    stack.append(b)
        comps.append(sorted(comp, key=M.index.index))
    return comps


def classify(M: CoxeterMatrix, J=None):
    """Finite types of the components of the diagram on J, or None if W_J is infinite."""
    out = []
    for comp in diagram_components(M, J):
        t = _classify_component(M, comp)
        if t is None:
            return None
        out.append((t[0], t[1], tuple(comp)))
    return out


def predicted_order(M: CoxeterMatrix, J=None):
    types = classify(M, J)
    if types is None:
        return None
    return math.prod(t[1] for t in types)


@dataclass(frozen=True)
class CoxeterSystem:
    matrix: CoxeterMatrix

    @property
    def index(self) -> tuple:
        return self.matrix.index

    def is_spherical_subset(self, J) -> bool:
        J = set(J)
        if not J <= set(self.index):
            raise InputError(f"{sorted(J - set(self.index))} not in the index set")
        return classify(self.matrix, J) is not None

    def spherical_subsets(self) -> list:
        """The poset S(W,S) as a list of sorted tuples, including the empty set.

        Built level by level, using that subsets of spherical sets are spherical.
        """
        idx = list(self.index)
        out = [()]
        level = [()]
        while level:
            nxt = []
            for J in level:
                start = idx.index(J[-1]) + 1 if J else 0
                for i in idx[start:]:
                    K = J + (i,)
                    if all(K[:k] + K[k + 1:] in set(out) for k in range(len(K))) and self.is_spherical_subset(K):
                        nxt.append(K)
            out.extend(nxt)
            level = nxt
        return out

    def nerve(self) -> SimplicialComplex:
        """L(W,S): vertices are the generator ids, simplices the nonempty spherical subsets."""
        return SimplicialComplex.from_simplices(self.index, [J for J in self.spherical_subsets() if J])

    def is_finite(self) -> bool:
        return self.is_spherical_subset(self.index)

    def order(self):
        return predicted_order(self.matrix)


def racs_from_graph(g: SimplicialComplex) -> CoxeterSystem:
    if g.dimension >= 2:
        raise InputError("racs_from_graph expects a graph")
    return CoxeterSystem(right_angled(g.vertices, g.edges()))


def davis_chamber(system: CoxeterSystem):
    """K(W,S): the canonical mirrored chamber of the nerve."""
    from .mirrors import canonical_chamber
    return canonical_chamber(system.nerve())


# ---------------------------------------------------------------------------
# finite group enumeration


@dataclass
class FiniteGroupTable:
    """Elements of a finite Coxeter group in ShortLex order.

    ``act[k][a]`` is the index of ``elements[k] * s_a`` where ``a`` is the
    position of the generator in ``index``.  Element 0 is the identity.
    """

    index: tuple
    elements: list
    act: list
    _lookup: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def gen_pos(self, s) -> int:
        try:
            return self.index.index(s)
        except ValueError:
            raise InputError(f"{s!r} is not a generator") from None

    def word_to_element(self, word, start: int = 0) -> int:
        k = start
        for s in word:
            k = self.act[k][self.gen_pos(s)]
        return k

    def left_mul(self, s, k: int) -> int:
        """Index of s_a * elements[k]."""
        return self.word_to_element(self.elements[k], start=self.act[0][self.gen_pos(s)])

    def multiply(self, a: int, b: int) -> int:
        return self.word_to_element(self.elements[b], start=a)

    def element(self, word) -> int:
        return self.word_to_element(word)


def _todd_coxeter(n: int, relators: list, limit: int) -> list:
    """Coset table of the trivial subgroup for a group generated by n involutions."""
    table = [[None] * n]
    parent = [0]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def new_coset():
        if len(table) >= limit:
            raise CapExceeded(f"coset enumeration exceeded {limit} cosets")
        table.append([None] * n)
        parent.append(len(parent))
        return len(table) - 1

    def merge(a, b, queue):
        a, b = find(a), find(b)
        if a == b:
            return
        a, b = min(a, b), max(a, b)
        parent[b] = a
        queue.append(b)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        while queue:
            g = queue.pop(0)
            for s in range(n):
                h = table[g][s]
                if h is None:
                    continue
                table[g][s] = None
                if table[h][s] == g:
                    table[h][s] = None
                e1, e2 = find(g), find(h)
                if table[e1][s] is not None:
                    merge(e2, table[e1][s], queue)
                elif table[e2][s] is not None:
                    merge(e1, table[e2][s], queue)
                else:
                    table[e1][s] = e2
                    table[e2][s] = e1

    def scan_and_fill(c, word):
        ln = len(word)
        while True:
            f, i = c, 0
            while i < ln and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i == ln:
                if f != c:
                    coincidence(f, c)
                return
            b, j = c, ln - 1
            while j >= i and table[b][word[j]] is not None:
                b = table[b][word[j]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i]] = f
                return
            d = new_coset()
            table[f][word[i]] = d
            table[d][word[i]] = f

    c = 0
    while c < len(table):
        if find(c) == c:
            for rel in relators:
                if find(c) != c:
                    break
                scan_and_fill(c, rel)
            if find(c) == c:
                for s in range(n):
                    if table[c][s] is None:
                        d = new_coset()
                        table[c][s] = d
                        table[d][s] = c
        c += 1
    live = [c for c in range(len(table)) if find(c) == c]
    ren = {c: k for k, c in enumerate(live)}
    return [[ren[find(table[c][s])] for s in range(n)] for c in live]


def enumerate_finite_group(system: CoxeterSystem, cap: int = DEFAULT_GROUP_CAP) -> FiniteGroupTable:
    M = system.matrix
    expected = predicted_order(M)
    if expected is None:
        raise InputError("Coxeter system is not spherical; refusing to enumerate")
    if expected > cap:
        raise CapExceeded(f"group order {expected} exceeds cap {cap}")
    n = len(M.index)
    rels = [[a] * 2 for a in range(n)]
    for a, b in combinations(range(n), 2):
        x = M.m[a][b]
        rels.append([a, b] * x)
    rels.sort(key=len)
    raw = _todd_coxeter(n, rels, limit=max(64 * expected, 1000))
    # ShortLex renumbering by breadth-first search in generator order
    words = {0: ()}
    order = [0]
    k = 0
    while k < len(order):
        c = order[k]
        for s in range(n):
            d = raw[c][s]
            if d not in words:
                words[d] = words[c] + (M.index[s],)
                order.append(d)
        k += 1
    if len(order) != expected:
        raise InputError(f"enumerated {len(order)} elements, classification predicts {expected}")
    ren = {c: k for k, c in enumerate(order)}
    act = [[ren[raw[c][s]] for s in range(n)] for c in order]
    return FiniteGroupTable(M.index, [words[c] for c in order], act)


@dataclass
class CosetSpace:
    """Left cosets wW_J of a special subgroup, with the left W-action."""

    table: FiniteGroupTable
    J: tuple
    coset_of: list          # element index -> coset index
    representatives: list   # coset index -> ShortLex-minimal element

    @property
    def index_(self) -> int:
        return len(self.representatives)

    def __len__(self):
        return len(self.representatives)

    def members(self, k: int) -> list:
        return [e for e, c in enumerate(self.coset_of) if c == k]

    def left_action(self, s, k: int) -> int:
        return self.coset_of[self.table.left_mul(s, self.representatives[k])]


def coset_space(table: FiniteGroupTable, J) -> CosetSpace:
    J = tuple(j for j in table.index if j in set(J))
    pos = [table.gen_pos(j) for j in J]
    coset_of = [-1] * table.order
    reps = []
    for e in range(table.order):
        if coset_of[e] >= 0:
            continue
        k = len(reps)
        reps.append(e)
        coset_of[e] = k
        stack = [e]
        while stack:
            x = stack.pop()
            for a in pos:
                y = table.act[x][a]
                if coset_of[y] < 0:
                    coset_of[y] = k
                    stack.append(y)
    return CosetSpace(table, J, coset_of, reps)
