"""Bundled example quivers and framed graphs used by tests and the CLI."""

from __future__ import annotations

from .dag import FramedDirectedGraph, parse_framed_graph
from .quiver import FringedQuiver, parse_quiver_file

KRONECKER = """\
# Kronecker fringed quiver: two parallel internal arrows e2, f2
fringed
vertex v1
vertex v2
fringe-vertex x1
fringe-vertex x2
fringe-vertex y1
fringe-vertex y2
arrow e1: x1 -> v1
arrow e2: v1 -> v2
arrow e3: v2 -> x2
arrow f1: y1 -> v1
arrow f2: v1 -> v2
arrow f3: v2 -> y2
relation e1 f2
relation f1 e2
relation e2 f3
relation f2 e3
"""

SHARD = """\
# shard fringed quiver: representation-finite but not paired
fringed
vertex v1
vertex v2
fringe-vertex w1
fringe-vertex w2
fringe-vertex w3
fringe-vertex w4
arrow e1: w1 -> v2
arrow e2: v2 -> v1
arrow e3: v1 -> v2
arrow e4: v2 -> w2
arrow f1: w3 -> v1
arrow f2: v1 -> w4
relation e1 e4
relation e3 e2
relation e2 f2
relation f1 e3
"""

DOUBLE_KRONECKER = """\
# double Kronecker fringed quiver: doubled A3 path
fringed
vertex v1
vertex v2
vertex v3
fringe-vertex x1
fringe-vertex x2
fringe-vertex y1
fringe-vertex y2
arrow e1: x1 -> v1
arrow e2: v1 -> v2
arrow e3: v2 -> v3
arrow e4: v3 -> x2
arrow f1: y1 -> v1
arrow f2: v1 -> v2
arrow f3: v2 -> v3
arrow f4: v3 -> y2
relation e1 f2
relation f1 e2
relation e2 f3
relation f2 e3
relation e3 f4
relation f3 e4
"""

TRIPLE_KRONECKER = """\
# triple Kronecker fringed quiver: doubled A4 path
fringed
vertex v1
vertex v2
vertex v3
vertex v4
fringe-vertex x1
fringe-vertex x2
fringe-vertex y1
fringe-vertex y2
arrow e1: x1 -> v1
arrow e2: v1 -> v2
arrow e3: v2 -> v3
arrow e4: v3 -> v4
arrow e5: v4 -> x2
arrow f1: y1 -> v1
arrow f2: v1 -> v2
arrow f3: v2 -> v3
arrow f4: v3 -> v4
arrow f5: v4 -> y2
relation e1 f2
relation f1 e2
relation e2 f3
relation f2 e3
relation e3 f4
relation f3 e4
relation e4 f5
relation f4 e5
"""

SINGLE_VERTEX = """\
# fringed quiver of the one-vertex quiver: one internal vertex, four fringe arrows
fringed
vertex v
fringe-vertex pa
fringe-vertex pb
fringe-vertex qa
fringe-vertex qb
arrow a: pa -> v
arrow ap: v -> qa
arrow b: pb -> v
arrow bp: v -> qb
relation a bp
relation b ap
"""

CUBE_DAG = """\
# square flow polytope: one internal vertex, doubled in/out edges
vertex s source
vertex t sink
vertex m
edge e1: s -> m label 1
edge e2: s -> m label 2
edge f1: m -> t label 1
edge f2: m -> t label 2
"""

DIFDAGC_DAG = """\
# a convenient gently framed DAG with two internal vertices
vertex s1 source
vertex s2 source
vertex s3 source
vertex t1 sink
vertex t2 sink
vertex t3 sink
vertex u
vertex v
edge p1: s1 -> u label 1
edge p2: s2 -> u label 2
edge m1: u -> v label 1
edge q2: u -> t1 label 2
edge n2: s3 -> v label 2
edge r1: v -> t2 label 1
edge r2: v -> t3 label 2
"""

# extra worked quiver (not registered as a bundled fixture): the flow with a
# singleton tracing interval lives on this shape
SINGLETON = """\
fringed
vertex v1
vertex v2
vertex v3
fringe-vertex sa
fringe-vertex sb
fringe-vertex sk
fringe-vertex s3
fringe-vertex t1
fringe-vertex t2
fringe-vertex t3
fringe-vertex t4
arrow alpha: sa -> v1
arrow beta: sb -> v1
arrow gamma: v1 -> v2
arrow b1: v1 -> t1
arrow a2: v2 -> t2
arrow b2: v2 -> t3
arrow delta: v3 -> v2
arrow kappa: sk -> v3
arrow b3: s3 -> v3
arrow eps: v3 -> t4
relation alpha b1
relation beta gamma
relation gamma b2
relation delta a2
relation kappa eps
relation b3 delta
"""

QUIVER_FIXTURES: dict[str, str] = {
    "kronecker": KRONECKER,
    "shard": SHARD,
    "double-kronecker": DOUBLE_KRONECKER,
    "triple-kronecker": TRIPLE_KRONECKER,
    "single-vertex": SINGLE_VERTEX,
}

DAG_FIXTURES: dict[str, str] = {
    "cube-dag": CUBE_DAG,
    "difdagc-dag": DIFDAGC_DAG,
}

FIXTURES: dict[str, str] = {**QUIVER_FIXTURES, **DAG_FIXTURES}


def fixture_quiver(name: str) -> FringedQuiver:
    q = parse_quiver_file(QUIVER_FIXTURES[name])
    assert isinstance(q, FringedQuiver)
    return q


def fixture_dag(name: str) -> FramedDirectedGraph:
    return parse_framed_graph(DAG_FIXTURES[name])


def singleton_quiver() -> FringedQuiver:
    q = parse_quiver_file(SINGLETON)
    assert isinstance(q, FringedQuiver)
    return q
