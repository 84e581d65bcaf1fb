"""Finite group presentations.

A word is a tuple of nonzero integers: ``k + 1`` stands for generator ``k``
and ``-(k + 1)`` for its inverse.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError
from .homology import CellComplex, smith_normal_form
from .simplicial import SimplicialComplex


def free_reduce(word) -> tuple:
    out: list = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def inverse(word) -> tuple:
    return tuple(-x for x in reversed(word))


def commutator(a, b) -> tuple:
    return (a, b, -a, -b)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise InputError("duplicate generator name")
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > n:
                    raise InputError(f"relator {r} mentions an undeclared generator")

    @classmethod
    def make(cls, generators, relators) -> "Presentation":
        return cls(tuple(generators), tuple(tuple(r) for r in relators))

    def format_word(self, word) -> list:
        return [self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in word]

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [self.format_word(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data) -> "Presentation":
        try:
            gens = [str(g) for g in data["generators"]]
            pos = {g: k + 1 for k, g in enumerate(gens)}
            rels = []
            for r in data["relators"]:
                w = []
                for tok in r:
                    tok = str(tok)
                    if tok.endswith("^-1"):
                        w.append(-pos[tok[:-3]])
                    else:
                        w.append(pos[tok])
                rels.append(tuple(w))
        except KeyError as exc:
            raise InputError(f"unknown generator {exc} in presentation") from exc
        except TypeError as exc:
            raise InputError(f"malformed presentation JSON: {exc}") from exc
        return cls(tuple(gens), tuple(rels))

    def __str__(self):
        rels = ", ".join(" ".join(self.format_word(r)) or "1" for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelian_invariants(P: Presentation) -> AbelianInvariants:
    n = len(P.generators)
    rows = {}
    for k, r in enumerate(P.relators):
        row: dict = {}
        for x in r:
            j = abs(x) - 1
            row[j] = row.get(j, 0) + (1 if x > 0 else -1)
        row = {j: c for j, c in row.items() if c}
        if row:
            rows[k] = row
    divs, rank = smith_normal_form(rows)
    return AbelianInvariants(n - rank, tuple(d for d in divs if d > 1))


def direct_sum(invs: Sequence[AbelianInvariants]) -> AbelianInvariants:
    """Combine invariants (torsion renormalized to invariant factors)."""
    diag = [d for a in invs for d in a.torsion]
    rows = {k: {k: d} for k, d in enumerate(diag)}
    divs, _ = smith_normal_form(rows)
    return AbelianInvariants(sum(a.free_rank for a in invs), tuple(d for d in divs if d > 1))


# constructions ----------------------------------------------------------------


def free_group(n: int, prefix: str = "x") -> Presentation:
    return Presentation(tuple(f"{prefix}{k}" for k in range(n)), ())


def cyclic_group(m: int | None, name: str = "g") -> Presentation:
    """Z/m, or Z when m is None."""
    return Presentation((name,), () if m is None else ((1,) * m,))


def graph_product(graph: SimplicialComplex, groups: Mapping) -> tuple:
    """Graph product of vertex groups.

    Returns ``(presentation, offsets)`` where generator k of the group at
    vertex v becomes generator ``offsets[v] + k``.  Generator names are kept
    when they are globally unique and suffixed with ``_v`` otherwise.
    """
    if set(groups) != set(graph.vertices):
        raise InputError("need one group per vertex")
    counts: dict = {}
    for v in graph.vertices:
        for g in groups[v].generators:
            counts[g] = counts.get(g, 0) + 1
    names, rels, offsets = [], [], {}
    for v in graph.vertices:
        G = groups[v]
        off = len(names)
        offsets[v] = off
        names += [g if counts[g] == 1 else f"{g}_{v}" for g in G.generators]
        for r in G.relators:
            rels.append(tuple((abs(x) + off) * (1 if x > 0 else -1) for x in r))
    for u, w in graph.edges():
        for a in range(len(groups[u].generators)):
            for b in range(len(groups[w].generators)):
                rels.append(commutator(offsets[u] + a + 1, offsets[w] + b + 1))
    return Presentation(tuple(names), tuple(rels)), offsets


def racg(graph: SimplicialComplex) -> Presentation:
    return graph_product(graph, {v: cyclic_group(2, f"s{v}") for v in graph.vertices})[0]


def raag(graph: SimplicialComplex) -> Presentation:
    return graph_product(graph, {v: cyclic_group(None, f"a{v}") for v in graph.vertices})[0]


# fundamental groups -----------------------------------------------------------


def _edge_ends(C: CellComplex, e):
    bd = C.boundary_of(e)
    if sorted(bd.values()) != [-1, 1]:
        raise InputError(f"1-cell {e!r} is not an edge between two distinct vertices")
    head = next(v for v, c in bd.items() if c == 1)
    tail = next(v for v, c in bd.items() if c == -1)
    return tail, head


def _boundary_cycle(C: CellComplex, cell, ends) -> list:
    """Walk the boundary chain of a 2-cell as a closed edge path [(edge, +-1), ...]."""
    steps = []
    for e, c in C.boundary_of(cell).items():
        t, h = ends[e]
        for _ in range(abs(c)):
            steps.append((e, 1, t, h) if c > 0 else (e, -1, h, t))
    if not steps:
        return []
    out_edges: dict = {}
    for s in steps:
        out_edges.setdefault(s[2], []).append(s)
    # Hierholzer from the start of the first step
    stack, circuit = [(None, steps[0][2])], []
    used = 0
    while stack:
        step, v = stack[-1]
        if out_edges.get(v):
            s = out_edges[v].pop(0)
            used += 1
            stack.append((s, s[3]))
        else:
            stack.pop()
            if step is not None:
                circuit.append(step)
    if used != len(steps) or any(out_edges.values()):
        raise InputError(f"boundary of 2-cell {cell!r} is not a single closed edge path")
    circuit.reverse()
    return [(s[0], s[1]) for s in circuit]


def pi1_from_two_skeleton(C: CellComplex, base=None) -> Presentation:
    """Edge-path presentation of the fundamental group.

    A breadth-first spanning tree from ``base`` (default: the first 0-cell)
    is contracted; the remaining edges are generators ``x<k>`` (k the position
    among 1-cells) and each 2-cell contributes its boundary word.
    """
    if not C.cells or not C.cells[0]:
        raise InputError("empty complex")
    verts = C.cells[0]
    base = verts[0] if base is None else base
    if base not in verts:
        raise InputError(f"{base!r} is not a 0-cell")
    edges = C.cells[1] if len(C.cells) > 1 else []
    ends = {e: _edge_ends(C, e) for e in edges}
    incident: dict = {v: [] for v in verts}
    for e in edges:
        t, h = ends[e]
        incident[t].append(e)
        incident[h].append(e)
    tree, seen, queue = set(), {base}, deque([base])
    while queue:
        v = queue.popleft()
        for e in incident[v]:
            t, h = ends[e]
            w = h if t == v else t
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    if len(seen) != len(verts):
        raise InputError("the 1-skeleton is disconnected")
    gens = [e for e in edges if e not in tree]
    gpos = {e: k + 1 for k, e in enumerate(gens)}
    names = tuple(f"x{edges.index(e)}" for e in gens)
    rels = []
    for cell in (C.cells[2] if len(C.cells) > 2 else []):
        word = [gpos[e] * s for e, s in _boundary_cycle(C, cell, ends) if e in gpos]
        rels.append(free_reduce(word))
    return Presentation(names, tuple(rels))


# Reidemeister-Schreier ----------------------------------------------------------


def _image_table(target, images, P: Presentation) -> list:
    """Element index of the image of each generator."""
    out = []
    for g in P.generators:
        if g not in images:
            raise InputError(f"no image for generator {g}")
        x = images[g]
        out.append(x if isinstance(x, int) else target.element(tuple(x)))
    return out


def reidemeister_schreier(P: Presentation, target, images: Mapping) -> Presentation:
    """Presentation of the kernel of P -> target (a FiniteGroupTable).

    ``images`` maps generator names to element indices or to words in the
    target's generators.  The Schreier transversal is built breadth-first,
    trying generators in declaration order and then their inverses.
    Schreier generators are named ``<gen>_<coset>``.
    """
    n = len(P.generators)
    img = _image_table(target, images, P)

    def inv_elem(x):
        return target.word_to_element(tuple(reversed(target.elements[x])))

    img_inv = [inv_elem(x) for x in img]

    def act(x, letter):
        y = img[letter - 1] if letter > 0 else img_inv[-letter - 1]
        return target.multiply(x, y)

    for r in P.relators:
        x = 0
        for a in r:
            x = act(x, a)
        if x != 0:
            raise InputError(f"relator {P.format_word(r)} does not map to the identity")
    cosets, parent = [0], {0: None}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for a in list(range(1, n + 1)) + list(range(-1, -n - 1, -1)):
            y = act(x, a)
            if y not in parent:
                parent[y] = (x, a)
                cosets.append(y)
                queue.append(y)
    if len(cosets) != target.order:
        warnings.warn(f"images generate a subgroup of order {len(cosets)} < {target.order}; "
                      "presenting the kernel onto the image", stacklevel=2)
    cid = {x: k for k, x in enumerate(cosets)}
    trivial = set()
    for y, pa in parent.items():
        if pa is None:
            continue
        x, a = pa
        trivial.add((x, a) if a > 0 else (y, -a))
    sgen = {}
    names = []
    for x in cosets:
        for g in range(1, n + 1):
            if (x, g) not in trivial:
                sgen[(x, g)] = len(names) + 1
                names.append(f"{P.generators[g - 1]}_{cid[x]}")
    rels = []
    for t in cosets:
        for r in P.relators:
            word, x = [], t
            for a in r:
                if a > 0:
                    if (x, a) in sgen:
                        word.append(sgen[(x, a)])
                    x = act(x, a)
                else:
                    y = act(x, a)
                    if (y, -a) in sgen:
                        word.append(-sgen[(y, -a)])
                    x = y
            rels.append(free_reduce(word))
    return Presentation(tuple(names), tuple(rels))


# Tietze moves -----------------------------------------------------------------


def _canonical(word) -> tuple:
    """Representative of a relator up to cyclic permutation and inversion."""
    if not word:
        return ()
    forms = []
    for w in (word, inverse(word)):
        for k in range(len(w)):
            forms.append(w[k:] + w[:k])
    return min(forms)


def tietze_simplify(P: Presentation, effort: int = 1000) -> Presentation:
    """Length-nonincreasing Tietze moves up to ``effort`` steps.

    Moves: cyclic reduction, removal of trivial and repeated relators, and
    elimination of a generator occurring exactly once in some relator.
    """
    gens = list(P.generators)
    rels = [cyclic_reduce(r) for r in P.relators]

    def tidy(rs):
        out, seen = [], set()
        for r in rs:
            r = cyclic_reduce(r)
            c = _canonical(r)
            if r and c not in seen:
                seen.add(c)
                out.append(r)
        return out

    rels = tidy(rels)
    while effort > 0:
        effort -= 1
        best = None
        for k, r in enumerate(rels):
            counts: dict = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, c in counts.items():
                if c != 1:
                    continue
                pos = next(i for i, x in enumerate(r) if abs(x) == g)
                rot = r[pos:] + r[:pos]
                # rot = g^e * rest  =>  g = rest^-1 (e = 1) or g = rest (e = -1)
                rest = rot[1:]
                sub = inverse(rest) if rot[0] > 0 else rest
                new_rels = []
                for j, s in enumerate(rels):
                    if j == k:
                        continue
                    w = []
                    for x in s:
                        if abs(x) == g:
                            w.extend(sub if x > 0 else inverse(sub))
                        else:
                            w.append(x)
                    new_rels.append(cyclic_reduce(w))
                old_len = sum(len(s) for s in rels)
                new_len = sum(len(s) for s in new_rels)
                if new_len <= old_len and (best is None or new_len < best[0]):
                    best = (new_len, g, new_rels)
        if best is None:
            break
        _, g, new_rels = best
        gens.pop(g - 1)
        renum = lambda x: x if abs(x) < g else (x - 1 if x > 0 else x + 1)
        rels = tidy([tuple(renum(x) for x in r) for r in new_rels])
    return Presentation(tuple(gens), tuple(rels))
