"""Command line surface: machine-readable reports over the library."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .quiver import (
    DomainError,
    FringedQuiver,
    GentleQuiver,
    StructuralError,
    find_pairing,
    fringe,
    is_representation_finite,
    parse_quiver_file,
    serialize_fringed,
    validate_gentle,
)
from . import complexes, dag, fixtures, flows, polyhedra, trails


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_quiver(path: str, want_fringed: bool = True):
    q = parse_quiver_file(_read(path))
    if want_fringed and isinstance(q, GentleQuiver):
        return fringe(q)
    return q


def _load_flow(f: FringedQuiver, path: str) -> flows.Flow:
    return flows.flow_from_json(f, json.loads(_read(path)))


def default_route_bound(f: FringedQuiver) -> int:
    return len(f.arrows) + 2 * len(f.internal_vertices)

def default_band_bound(f: FringedQuiver) -> int:
    return 2 * len(f.internal_vertices) + 2


def _report(args, payload, bounds=None, input_path=None):
    meta = {
        "tool": "gentleflow",
        "version": __version__,
        "command": args.command,
    }
    if input_path:
        meta["input_sha256"] = hashlib.sha256(_read(input_path).encode()).hexdigest()
    if bounds:
        meta["bounds"] = bounds
    threads = os.environ.get("GENTLEFLOW_THREADS")
    if threads is not None:
        meta["threads_cap"] = threads
    doc = {"meta": meta, "payload": payload}
    indent = 2 if args.pretty else None
    print(json.dumps(doc, indent=indent, sort_keys=True))


def cmd_validate(args):
    q = parse_quiver_file(_read(args.file))
    if isinstance(q, FringedQuiver):
        q.validate()
        payload = {"kind": "fringed", "violations": []}
    else:
        payload = {"kind": "gentle", "violations": validate_gentle(q)}
    _report(args, payload, input_path=args.file)
    if payload["violations"]:
        err = {"error": "DomainError", "message": "; ".join(payload["violations"])}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    return 0


def cmd_fringe(args):
    q = parse_quiver_file(_read(args.file))
    if isinstance(q, FringedQuiver):
        raise DomainError("input is already fringed")
    f = fringe(q)
    text = serialize_fringed(f)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    _report(args, {"fringed": text}, input_path=args.file)
    return 0


def cmd_pairing(args):
    f = _load_quiver(args.file)
    psi = find_pairing(f)
    payload = {"paired": psi is not None, "pairing": psi,
               "representation_finite": is_representation_finite(f)}
    _report(args, payload, input_path=args.file)
    return 0


def cmd_routes(args):
    f = _load_quiver(args.file)
    bound = args.max_arrows or default_route_bound(f)
    calc = trails.calculus(f)
    routes = sorted(trails.enumerate_routes(f, bound), key=trails.trail_key)
    payload = [{"trail": str(p),
                "self_compatible": calc.self_compatible(p),
                "straight": trails.is_straight(p),
                "elementary": trails.is_elementary_route(f, p)}
               for p in routes]
    _report(args, payload, bounds={"max_arrows": bound}, input_path=args.file)
    return 0


def cmd_bands(args):
    f = _load_quiver(args.file)
    bound = args.max_arrows or default_band_bound(f)
    calc = trails.calculus(f)
    bands = sorted(trails.enumerate_bands(f, bound), key=trails.trail_key)
    payload = [{"trail": str(b),
                "self_compatible": calc.self_compatible(b),
                "elementary": trails.is_elementary_band(f, b)}
               for b in bands]
    _report(args, payload, bounds={"max_arrows": bound}, input_path=args.file)
    return 0


def cmd_gvector(args):
    f = _load_quiver(args.file)
    t = trails.parse_trail(args.trail)
    if isinstance(t, trails.Band):
        if not trails.is_band_walk(f, t.walk):
            raise DomainError("not a band of this quiver")
    elif not trails.is_route_walk(f, t.walk):
        raise DomainError("not a route of this quiver")
    g = trails.g_vector(f, t)
    _report(args, {v: g[v] for v in sorted(g)}, input_path=args.file)
    return 0


def cmd_decompose(args):
    f = _load_quiver(args.file)
    F = _load_flow(f, args.flow)
    if args.vortex:
        payload = flows.decompose_vortex(F).as_json()
    else:
        payload = flows.decompose_bundle(F).as_json()
    _report(args, payload, input_path=args.file)
    return 0


def cmd_blanks(args):
    f = _load_quiver(args.file)
    F = _load_flow(f, args.flow)
    spaces = flows.blank_spaces(F)
    payload = {"count": len(spaces), "blank_spaces": [b.as_json() for b in spaces]}
    _report(args, payload, input_path=args.file)
    return 0


def cmd_cliques(args):
    f = _load_quiver(args.file)
    bound = args.max_arrows or default_route_bound(f)
    ks = complexes.maximal_cliques(f, bound)
    payload = [(k.reduced() if args.reduced else k).as_json() for k in ks]
    _report(args, payload, bounds={"route_bound": bound}, input_path=args.file)
    return 0


def cmd_bundles(args):
    f = _load_quiver(args.file)
    rb = args.max_arrows or default_route_bound(f)
    bb = args.band_bound or default_band_bound(f)
    bs = complexes.maximal_bundles(f, rb, bb)
    payload = {
        "bundles": [b.as_json() for b in bs],
        "with_bands": [b.as_json() for b in bs if b.bands],
    }
    _report(args, payload, bounds={"route_bound": rb, "band_bound": bb},
            input_path=args.file)
    return 0


def cmd_band_stable(args):
    f = _load_quiver(args.file)
    rb = args.max_arrows or default_route_bound(f)
    bb = args.band_bound or default_band_bound(f)
    ks = complexes.band_stable_cliques(f, rb, bb)
    maximal = {frozenset(k.routes) for k in complexes.maximal_cliques(f, rb)}
    payload = [{"clique": k.as_json(), "maximal": frozenset(k.routes) in maximal}
               for k in ks]
    _report(args, payload, bounds={"route_bound": rb, "band_bound": bb},
            input_path=args.file)
    return 0


def cmd_vertices(args):
    f = _load_quiver(args.file)
    _report(args, polyhedra.turbulence_presentation(f).as_json(), input_path=args.file)
    return 0


def cmd_rays(args):
    f = _load_quiver(args.file)
    turb = polyhedra.turbulence_presentation(f)
    gpoly = polyhedra.g_polyhedron_presentation(f)
    payload = {
        "turbulence_rays": turb.as_json()["rays"],
        "g_polyhedron": gpoly.as_json(),
    }
    _report(args, payload, input_path=args.file)
    return 0


def cmd_facets(args):
    f = _load_quiver(args.file)
    payload = [{"avoided": sorted(W), "halfspace": hs.as_json()}
               for W, hs in polyhedra.g_facets(f)]
    _report(args, payload, input_path=args.file)
    return 0


def cmd_cells(args):
    f = _load_quiver(args.file)
    rb = args.max_arrows or default_route_bound(f)
    bb = args.band_bound or default_band_bound(f)
    if args.kind == "clique":
        payload = [k.as_json() for k in complexes.maximal_cliques(f, rb)]
    elif args.kind == "bundle":
        payload = [b.as_json() for b in complexes.maximal_bundles(f, rb, bb)]
    else:
        cells = []
        bands = complexes.band_universe(f, bb)
        calc = trails.calculus(f)
        for k in complexes.band_stable_cliques(f, rb, bb):
            generators = [b for b in bands
                          if all(calc.compatible(b, p) for p in k.routes)]
            cells.append({"clique": k.as_json(),
                          "band_generators": [str(b) for b in generators]})
        payload = cells
    _report(args, payload, bounds={"route_bound": rb, "band_bound": bb},
            input_path=args.file)
    return 0


def cmd_convert_dag(args):
    g = dag.parse_framed_graph(_read(args.file))
    violations = dag.validate_framed(g)
    if violations:
        raise DomainError("; ".join(violations))
    g2 = dag.make_convenient(g)
    f, psi = dag.to_fringed_quiver(g2)
    payload = {
        "convenient": dag.is_convenient(g),
        "acyclic": g.is_acyclic(),
        "fringed": serialize_fringed(f),
        "pairing": psi,
    }
    _report(args, payload, input_path=args.file)
    return 0


def cmd_dag_decompose(args):
    g = dag.parse_framed_graph(_read(args.file))
    violations = dag.validate_framed(g)
    if violations:
        raise DomainError("; ".join(violations))
    F = dag.DagFlow(g, {e: flows.parse_rational(x)
                        for e, x in json.loads(_read(args.flow)).items()})
    payload = dag.decomposition_json(dag.dag_decompose(F))
    _report(args, payload, input_path=args.file)
    return 0


def cmd_examples(args):
    name = args.name
    if name not in fixtures.FIXTURES:
        raise DomainError(f"unknown example {name!r}; choose from {sorted(fixtures.FIXTURES)}")
    text = fixtures.FIXTURES[name]
    payload = {"name": name, "file": text}
    if name in fixtures.QUIVER_FIXTURES:
        f = fixtures.fixture_quiver(name)
        payload["reports"] = {
            "vertices": polyhedra.turbulence_presentation(f).as_json(),
            "g_polyhedron": polyhedra.g_polyhedron_presentation(f).as_json(),
        }
    _report(args, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gentleflow")
    ap.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, with_file=True):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        if with_file:
            p.add_argument("file")
        return p

    for cmd, fn in [("validate", cmd_validate), ("pairing", cmd_pairing),
                    ("vertices", cmd_vertices), ("rays", cmd_rays),
                    ("facets", cmd_facets), ("convert-dag", cmd_convert_dag)]:
        add(cmd, fn)

    p = add("fringe", cmd_fringe)
    p.add_argument("-o", "--output")

    for cmd, fn in [("routes", cmd_routes), ("bands", cmd_bands)]:
        p = add(cmd, fn)
        p.add_argument("--max-arrows", type=int)

    p = add("gvector", cmd_gvector)
    p.add_argument("--trail", required=True)

    p = add("decompose", cmd_decompose)
    p.add_argument("--flow", required=True)
    p.add_argument("--vortex", action="store_true")

    p = add("blanks", cmd_blanks)
    p.add_argument("--flow", required=True)

    p = add("cliques", cmd_cliques)
    p.add_argument("--max-arrows", type=int)
    p.add_argument("--reduced", action="store_true")

    for cmd, fn in [("bundles", cmd_bundles), ("band-stable", cmd_band_stable)]:
        p = add(cmd, fn)
        p.add_argument("--max-arrows", type=int)
        p.add_argument("--band-bound", type=int)

    p = add("cells", cmd_cells)
    p.add_argument("--kind", choices=["clique", "bundle", "vortex"], required=True)
    p.add_argument("--max-arrows", type=int)
    p.add_argument("--band-bound", type=int)

    p = add("dag-decompose", cmd_dag_decompose)
    p.add_argument("--flow", required=True)

    p = add("examples", cmd_examples, with_file=False)
    p.add_argument("name")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, StructuralError, FileNotFoundError, json.JSONDecodeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
