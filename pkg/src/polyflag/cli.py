"""Command-line front end.

Every command reads JSON inputs, calls the library and writes JSON (or a
plain-text rendering with ``--format text``).  Exit codes: 0 success,
1 a check failed (a witness is printed), 2 bad input or a size cap was hit.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import coxeter as cx
from . import corners, mirrors, polyhedral, presentations as pres
from .errors import CapExceeded, CheckFailed, InputError
from .homology import CellComplex, chain_complex_of_simplicial, homology
from .simplicial import (SimplicialComplex, SimplicialMap, barycentric_subdivision, clique_complex,
                         greedy_coloring, is_flag, missing_face, simplex)

DEFAULT_MAX_CELLS = 2 * 10 ** 6
DEFAULT_MAX_GROUP_ORDER = 10 ** 5


class Failure(Exception):
    """A check failed; ``payload`` is printed before exiting with status 1."""

    def __init__(self, payload):
        super().__init__("check failed")
        self.payload = payload


# input helpers ------------------------------------------------------------------


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _complex(path) -> SimplicialComplex:
    return SimplicialComplex.from_json(_load(path))


def _cells(path):
    """A cell complex file, or a simplicial complex file turned into its chain complex."""
    data = _load(path)
    if isinstance(data, dict) and "facets" in data:
        return chain_complex_of_simplicial(SimplicialComplex.from_json(data))
    return CellComplex.from_json(data)


def _coloring(source, L: SimplicialComplex) -> SimplicialMap:
    if source == "id":
        return SimplicialMap(L, simplex(range(len(L.vertices))), {v: k for k, v in enumerate(L.vertices)})
    if source == "greedy":
        return greedy_coloring(L)
    data = _load(source)
    try:
        vm = {int(k): int(v) for k, v in data["vertex_map"].items()}
        n = int(data["codomain_rank"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed coloring JSON: {exc}") from exc
    return SimplicialMap(L, simplex(range(n + 1)), vm)


def _system(path) -> cx.CoxeterSystem:
    return cx.CoxeterSystem(cx.CoxeterMatrix.from_json(_load(path)))


def _table(args, system):
    return cx.enumerate_finite_group(system, cap=args.max_group_order)


def _guard(C, args):
    if len(C) > args.max_cells:
        raise CapExceeded(f"result has {len(C)} cells, above --max-cells {args.max_cells}")
    return C


def _simplicial_out(L: SimplicialComplex) -> dict:
    out = L.to_json()
    if L.labels:
        out["labels"] = {str(v): _plain(x) for v, x in L.labels.items()}
    return out


def _plain(x):
    if isinstance(x, (tuple, list, frozenset, set)):
        return [_plain(y) for y in (sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x)]
    if isinstance(x, SimplicialComplex):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


# commands ------------------------------------------------------------------------


def cmd_flag_check(args):
    L = _complex(args.input)
    w = missing_face(L)
    if w is not None:
        raise Failure({"flag": False, "witness": list(w)})
    return {"flag": True}


def cmd_clique_complex(args):
    return _simplicial_out(clique_complex(_complex(args.input)))


def cmd_barycentric(args):
    return _simplicial_out(barycentric_subdivision(_complex(args.input)))


def cmd_nerve(args):
    if args.coxeter:
        return _simplicial_out(_system(args.coxeter).nerve())
    if args.mirrored:
        return _simplicial_out(mirrors.nerve_of_mirrors(mirrors.MirroredComplex.from_json(_load(args.mirrored))))
    raise InputError("nerve needs --coxeter or --mirrored")


def cmd_davis_chamber(args):
    return mirrors.canonical_chamber(_system(args.coxeter).nerve()).to_json()


def cmd_basic_construction(args):
    system = _system(args.coxeter)
    if args.mirrored:
        X = mirrors.MirroredComplex.from_json(_load(args.mirrored))
    elif args.chamber == "davis":
        X = mirrors.canonical_chamber(system.nerve())
    else:
        X = mirrors.simplex_chamber(system.index)
    table = _table(args, system)
    if mirrors.basic_construction_count(table, X) > args.max_cells:
        raise CapExceeded("basic construction exceeds --max-cells")
    return mirrors.basic_construction(table, X).to_json()


def cmd_coxeter_complex(args):
    table = _table(args, _system(args.coxeter))
    K, col, _ = mirrors.coxeter_complex(table)
    out = _simplicial_out(K)
    out["coloring"] = {"vertex_map": {str(v): c for v, c in col.vertex_map.items()},
                       "codomain_rank": len(table.index) - 1}
    return out


def cmd_polyhedral_product(args):
    L = _complex(args.complex)
    data = _load(args.pairs)
    try:
        raw = data["pairs"]
        pairs = {int(k): polyhedral.CellPair.from_json(v) for k, v in raw.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pairs JSON: {exc}") from exc
    return polyhedral.polyhedral_product(L, pairs, max_cells=args.max_cells).to_json()


def cmd_chamber(args):
    return _guard(polyhedral.chamber(_complex(args.input)), args).to_json()


def cmd_real_toric(args):
    return _guard(polyhedral.real_toric(_complex(args.input), subdivided=args.subdivided), args).to_json()


def cmd_moment_angle(args):
    return _guard(polyhedral.moment_angle(_complex(args.input)), args).to_json()


def cmd_cone_pair(args):
    L = _complex(args.complex)
    try:
        E = _load(args.sets)["factors"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed sets JSON: {exc}") from exc
    if len(E) != len(L.vertices):
        raise InputError(f"{len(E)} sets for {len(L.vertices)} vertices")
    return _guard(polyhedral.cone_pair_product(L, E), args).to_json()


def cmd_graph_product(args):
    G = _complex(args.graph)
    try:
        raw = _load(args.groups)["groups"]
        groups = {int(k): pres.Presentation.from_json(v) for k, v in raw.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed groups JSON: {exc}") from exc
    P, offsets = pres.graph_product(G, groups)
    out = P.to_json()
    out["offsets"] = {str(k): v for k, v in offsets.items()}
    return out


def cmd_racg(args):
    return pres.racg(_complex(args.input)).to_json()


def cmd_raag(args):
    return pres.raag(_complex(args.input)).to_json()


def cmd_pi1(args):
    C = _cells(args.input)
    base = None if args.base is None else C.cells[0][args.base]
    P = pres.pi1_from_two_skeleton(C, base)
    if args.simplify:
        P = pres.tietze_simplify(P, args.simplify)
    return P.to_json()


def cmd_rs_kernel(args):
    P = pres.Presentation.from_json(_load(args.presentation))
    table = _table(args, _system(args.coxeter))
    images = _load(args.images)
    if not isinstance(images, dict):
        raise InputError("images JSON must map generator names to words")
    K = pres.reidemeister_schreier(P, table, {g: tuple(w) for g, w in images.items()})
    if args.simplify:
        K = pres.tietze_simplify(K, args.simplify)
    return K.to_json()


def cmd_abelianization(args):
    return pres.abelian_invariants(pres.Presentation.from_json(_load(args.input))).to_json()


def cmd_homology(args):
    return homology(_cells(args.input), reduced=args.reduced).to_json()


def cmd_pullback(args):
    L = _complex(args.complex)
    f = _coloring(args.coloring, L)
    n = len(f.codomain.vertices) - 1
    if args.corner == "cube":
        X = corners.cube_corner(n)
    else:
        X = mirrors.MirroredComplex.from_json(_load(args.corner))
    return _guard(corners.pullback(f, X, require_corner=not args.allow_non_corner), args).to_json()


def cmd_gromov_check(args):
    rep = corners.gromov_check(_cells(args.input))
    out = {"verdict": rep["verdict"],
           "vertices": [{k: _plain(v) for k, v in r.items()} for r in rep["vertices"]]}
    if rep["verdict"] != "PASS":
        raise Failure(out)
    return out


def cmd_asphericity_report(args):
    L = _complex(args.complex)
    raw = _load(args.metadata)
    try:
        meta = {int(k): dict(v) for k, v in raw.items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed metadata JSON: {exc}") from exc
    rep = polyhedral.asphericity_report(L, meta)
    if rep["verdict"] != "PASS":
        raise Failure(rep)
    return rep


def cmd_corner_report(args):
    X = mirrors.MirroredComplex.from_json(_load(args.mirrored))
    cover = mirrors.MirroredComplex.from_json(_load(args.cover)) if args.cover else None
    rep = corners.corner_conditions_report(corners.make_corner(X), args.declared_aspherical, cover)
    if rep["verdict"] == "FAIL":
        raise Failure(rep)
    return rep


def cmd_manifold_certificate(args):
    rep = corners.closed_manifold_certificate(_cells(args.input), args.dim)
    rep = _plain(rep)
    if rep["verdict"] != "PASS":
        raise Failure(rep)
    return rep


def cmd_selftest(args):
    """Randomized spot checks of the main identities."""
    from .homology import cell_isomorphism_signs
    from .simplicial import graph as make_graph
    rng = random.Random(args.seed)
    results = []
    for trial in range(args.trials):
        n = rng.randint(1, 5)
        vs = list(range(n))
        G = make_graph(vs, [(a, b) for a in vs for b in vs if a < b and rng.random() < 0.5])
        L = clique_complex(G)
        f = greedy_coloring(L)
        Y = corners.pullback(f, corners.cube_corner(len(f.codomain.vertices) - 1))
        Z = polyhedral.chamber(L)
        try:
            cell_isomorphism_signs(Y, Z, corners.pullback_to_chamber_map(f, Y))
            iso = True
        except CheckFailed:
            iso = False
        gromov = corners.gromov_check(polyhedral.real_toric(L))["verdict"] == "PASS"
        ok = iso and is_flag(L) and gromov
        results.append({"trial": trial, "facets": [list(s) for s in L.facets()], "ok": ok})
    out = {"seed": args.seed, "trials": results, "verdict": "PASS" if all(r["ok"] for r in results) else "FAIL"}
    if out["verdict"] != "PASS":
        raise Failure(out)
    return out


# parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    common.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_GROUP_ORDER)

    p = argparse.ArgumentParser(prog="polyflag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *positional):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for pos in positional:
            sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("flag-check", cmd_flag_check, "is the complex flag? (exit 1 with a missing simplex)", "input")
    add("clique-complex", cmd_clique_complex, "clique complex of a graph", "input")
    add("barycentric", cmd_barycentric, "barycentric subdivision", "input")
    sp = add("nerve", cmd_nerve, "nerve of a Coxeter system or of a mirror structure")
    sp.add_argument("--coxeter")
    sp.add_argument("--mirrored")
    sp = add("davis-chamber", cmd_davis_chamber, "Davis chamber of a Coxeter system")
    sp.add_argument("--coxeter", required=True)
    sp = add("basic-construction", cmd_basic_construction, "U(W,X) for a finite Coxeter group")
    sp.add_argument("--coxeter", required=True)
    sp.add_argument("--mirrored", help="mirrored complex JSON (default: the simplex chamber)")
    sp.add_argument("--chamber", choices=["simplex", "davis"], default="simplex")
    sp = add("coxeter-complex", cmd_coxeter_complex, "Coxeter complex with its type coloring")
    sp.add_argument("--coxeter", required=True)
    sp = add("polyhedral-product", cmd_polyhedral_product, "Z_L(A,B) for a family of cell pairs")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--pairs", required=True)
    add("chamber", cmd_chamber, "Z_L([0,1],1)", "input")
    sp = add("real-toric", cmd_real_toric, "Z_L(D^1,S^0)", "input")
    sp.add_argument("--subdivided", action="store_true", help="use the interval with a midpoint vertex")
    add("moment-angle", cmd_moment_angle, "Z_L(D^2,S^1)", "input")
    sp = add("cone-pair", cmd_cone_pair, "Z_L(Cone E, E)")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--sets", required=True, help='{"factors": [[...], ...]} in vertex order')
    sp = add("graph-product", cmd_graph_product, "graph product of presented groups")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--groups", required=True, help='{"groups": {"<vertex>": <presentation>}}')
    add("racg", cmd_racg, "right-angled Coxeter group of a graph", "input")
    add("raag", cmd_raag, "right-angled Artin group of a graph", "input")
    sp = add("pi1", cmd_pi1, "fundamental group presentation from the 2-skeleton", "input")
    sp.add_argument("--base", type=int, help="index of the base 0-cell")
    sp.add_argument("--simplify", type=int, default=0, help="Tietze effort budget")
    sp = add("rs-kernel", cmd_rs_kernel, "Reidemeister-Schreier kernel onto a finite Coxeter group")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--coxeter", required=True)
    sp.add_argument("--images", required=True, help="generator name -> word in Coxeter generator ids")
    sp.add_argument("--simplify", type=int, default=0)
    add("abelianization", cmd_abelianization, "abelian invariants of a presentation", "input")
    sp = add("homology", cmd_homology, "integer homology of a cell or simplicial complex", "input")
    sp.add_argument("--reduced", action="store_true")
    sp = add("pullback", cmd_pullback, "pullback f*(X) of a corner along a coloring")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--coloring", default="id", help="'id', 'greedy' or a coloring JSON file")
    sp.add_argument("--corner", default="cube", help="'cube' or a mirrored complex JSON file")
    sp.add_argument("--allow-non-corner", action="store_true")
    add("gromov-check", cmd_gromov_check, "flag test of all vertex links of a cube complex", "input")
    sp = add("asphericity-report", cmd_asphericity_report, "hypotheses for asphericity of Z_L(A,B)")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--metadata", required=True)
    sp = add("corner-report", cmd_corner_report, "hypotheses for a corner of spaces")
    sp.add_argument("--mirrored", required=True)
    sp.add_argument("--declared-aspherical", action="store_true")
    sp.add_argument("--cover", help="finite mirrored complex standing in for the universal cover")
    sp = add("manifold-certificate", cmd_manifold_certificate, "homology-manifold certificate", "input")
    sp.add_argument("--dim", type=int, required=True)
    sp = add("selftest", cmd_selftest, "randomized spot checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10)
    return p


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(render_text(x, indent) if isinstance(x, dict) else f"{pad}- {json.dumps(x)}" for x in obj)
    return f"{pad}{obj}"


def _emit(obj, args, stream):
    text = render_text(obj) if args.format == "text" else json.dumps(obj, sort_keys=False)
    if args.output and stream is sys.stdout:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        stream.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except Failure as exc:
        _emit(_plain(exc.payload), args, sys.stdout)
        return 1
    except CheckFailed as exc:
        _emit({"error": str(exc), "witness": _plain(exc.witness)}, args, sys.stdout)
        return 1
    except (InputError, CapExceeded) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    _emit(_plain(out), args, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
