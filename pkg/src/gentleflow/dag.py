"""Amply framed directed graphs and the bridge to paired fringed quivers.

A full directed graph with edge labels in {1, 2} realizing the framing (and
with every oriented cycle bilabelled) corresponds, when convenient and gently
framed, to a paired fringed quiver: 1-edges keep their direction, 2-edges
flip, and relations are the mixed-label compositions.  The flow algorithm
specializes to a two-branch Forward map read off the labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .flows import QInterval, parse_rational
from .quiver import DomainError, FringedQuiver, StructuralError, _strip_comment
from .trails import Band, MarkedTrail, Route, Trail, trail_key

Q = Fraction


@dataclass(frozen=True)
class FramedDirectedGraph:
    vertices: dict[str, str]            # id -> "source" | "sink" | "internal"
    edges: dict[str, tuple[str, str]]   # id -> (tail, head)
    labels: dict[str, int]              # psi: id -> 1 | 2

    def edges_in(self, v: str) -> list[str]:
        return sorted(e for e, (_t, h) in self.edges.items() if h == v)

    def edges_out(self, v: str) -> list[str]:
        return sorted(e for e, (t, _h) in self.edges.items() if t == v)

    def check_structure(self) -> None:
        for e, (t, h) in self.edges.items():
            if t not in self.vertices or h not in self.vertices:
                raise StructuralError(f"edge {e} has a dangling endpoint")
            if self.labels.get(e) not in (1, 2):
                raise StructuralError(f"edge {e} needs a label in {{1, 2}}")
        for v, kind in self.vertices.items():
            if kind not in ("source", "sink", "internal"):
                raise StructuralError(f"vertex {v} has unknown kind {kind!r}")

    def is_acyclic(self) -> bool:
        color = dict.fromkeys(self.vertices, 0)

        def visit(v) -> bool:
            color[v] = 1
            for e in self.edges_out(v):
                w = self.edges[e][1]
                if color[w] == 1 or (color[w] == 0 and visit(w)):
                    return True
            color[v] = 2
            return False

        return not any(color[v] == 0 and visit(v) for v in self.vertices)


def validate_framed(g: FramedDirectedGraph) -> list[str]:
    """Violations of the amply-framed axioms (empty list = amply framed)."""
    g.check_structure()
    violations = []
    for v, kind in g.vertices.items():
        ins, outs = g.edges_in(v), g.edges_out(v)
        actual = "source" if not ins else "sink" if not outs else "internal"
        if kind != actual:
            violations.append(f"vertex {v} declared {kind} but is {actual}")
        if actual == "internal":
            if len(ins) != 2 or len(outs) != 2:
                violations.append(f"internal vertex {v} is not full (in={len(ins)}, out={len(outs)})")
            else:
                if {g.labels[e] for e in ins} != {1, 2}:
                    violations.append(f"in-edges of {v} do not realize the framing")
                if {g.labels[e] for e in outs} != {1, 2}:
                    violations.append(f"out-edges of {v} do not realize the framing")
    for label in (1, 2):
        if _has_monolabel_cycle(g, label):
            violations.append(f"oriented cycle using only {label}-edges")
    return violations


def _has_monolabel_cycle(g: FramedDirectedGraph, label: int) -> bool:
    color = dict.fromkeys(g.vertices, 0)

    def visit(v) -> bool:
        color[v] = 1
        for e in g.edges_out(v):
            if g.labels[e] != label:
                continue
            w = g.edges[e][1]
            if color[w] == 1 or (color[w] == 0 and visit(w)):
                return True
        color[v] = 2
        return False

    return any(color[v] == 0 and visit(v) for v in g.vertices)


def is_convenient(g: FramedDirectedGraph) -> bool:
    return all(len(g.edges_in(v)) + len(g.edges_out(v)) == 1
               for v, kind in g.vertices.items() if kind != "internal")


def is_gently_framed(g: FramedDirectedGraph) -> bool:
    return not any(g.vertices[t] == "source" and g.vertices[h] == "sink"
                   for _e, (t, h) in g.edges.items())


def make_convenient(g: FramedDirectedGraph) -> FramedDirectedGraph:
    """Split every multi-edge source/sink into one vertex per incident edge.

    New vertices are named ``old@edge`` so results can be mapped back.
    """
    vertices = {v: k for v, k in g.vertices.items() if k == "internal"}
    edges = {}
    for e, (t, h) in g.edges.items():
        if g.vertices[t] != "internal":
            nt = t if len(g.edges_out(t)) + len(g.edges_in(t)) == 1 else f"{t}@{e}"
            vertices[nt] = g.vertices[t]
        else:
            nt = t
        if g.vertices[h] != "internal":
            nh = h if len(g.edges_out(h)) + len(g.edges_in(h)) == 1 else f"{h}@{e}"
            vertices[nh] = g.vertices[h]
        else:
            nh = h
        edges[e] = (nt, nh)
    return FramedDirectedGraph(vertices, edges, dict(g.labels))


def to_fringed_quiver(g: FramedDirectedGraph) -> tuple[FringedQuiver, dict[str, int]]:
    """Keep 1-edges, reverse 2-edges; relations are the mixed-label pairs.

    Requires a convenient gently framed graph; returns the fringed quiver and
    the transported pairing.  Edge and vertex ids are preserved.
    """
    bad = validate_framed(g)
    if bad:
        raise DomainError("not amply framed: " + "; ".join(bad))
    if not is_convenient(g):
        raise DomainError("graph is not convenient (split sources/sinks first)")
    if not is_gently_framed(g):
        raise DomainError("graph is not gently framed (source-to-sink edge)")

    arrows = {}
    for e, (t, h) in g.edges.items():
        arrows[e] = (t, h) if g.labels[e] == 1 else (h, t)
    internal = tuple(sorted(v for v, k in g.vertices.items() if k == "internal"))
    fringe = tuple(sorted(v for v, k in g.vertices.items() if k != "internal"))

    relation_pairs = {}
    for v in internal:
        ins = [a for a, (_t, h) in arrows.items() if h == v]
        outs = [a for a, (t, _h) in arrows.items() if t == v]
        pairs = sorted((a, b) for a in ins for b in outs if g.labels[a] != g.labels[b])
        if len(pairs) != 2:
            raise DomainError(f"vertex {v} does not produce two relations")
        relation_pairs[v] = (pairs[0], pairs[1])

    f = FringedQuiver(internal, fringe, arrows, relation_pairs)
    f.validate()
    return f, dict(g.labels)


def from_paired(f: FringedQuiver, psi: dict[str, int]) -> FramedDirectedGraph:
    """The directed flow-graph of a paired fringed quiver: 1-arrows keep their
    direction, 2-arrows flip.  Acyclic exactly when f is representation-finite."""
    for a in f.arrows:
        if psi.get(a) not in (1, 2):
            raise DomainError(f"pairing does not label arrow {a}")
    edges = {}
    for a, (t, h) in f.arrows.items():
        edges[a] = (t, h) if psi[a] == 1 else (h, t)
    vertices = {}
    for v in list(f.internal_vertices) + list(f.fringe_vertices):
        ins = [e for e, (_t, h) in edges.items() if h == v]
        outs = [e for e, (t, _h) in edges.items() if t == v]
        vertices[v] = "source" if not ins else "sink" if not outs else "internal"
    g = FramedDirectedGraph(vertices, edges, dict(psi))
    bad = validate_framed(g)
    if bad:
        raise DomainError("pairing does not induce an amply framed graph: " + "; ".join(bad))
    return g


# -- flows on framed directed graphs -------------------------------------------

class DagFlow:
    def __init__(self, g: FramedDirectedGraph, values: dict[str, Fraction] | None = None):
        self.graph = g
        vals = {e: Q(0) for e in g.edges}
        for e, x in (values or {}).items():
            if e not in vals:
                raise DomainError(f"flow value on unknown edge {e}")
            vals[e] = parse_rational(x)
        self.values = vals
        self._scaled: tuple[int, dict[str, int]] | None = None
        for e, x in vals.items():
            if x < 0:
                raise DomainError(f"negative flow on edge {e}")
        for v, kind in g.vertices.items():
            if kind == "internal":
                if sum(vals[e] for e in g.edges_in(v)) != sum(vals[e] for e in g.edges_out(v)):
                    raise DomainError(f"conservation of flow fails at vertex {v}")

    def __getitem__(self, e: str) -> Fraction:
        return self.values[e]

    def scaled(self) -> tuple[int, dict[str, int]]:
        if self._scaled is None:
            from math import lcm
            den = lcm(*(x.denominator for x in self.values.values()), 1)
            self._scaled = (den, {e: int(x * den) for e, x in self.values.items()})
        return self._scaled


def _labelled(g: FramedDirectedGraph, edges: list[str]) -> dict[int, str]:
    out = {g.labels[e]: e for e in edges}
    if len(out) != len(edges):
        raise DomainError("framing not realized")
    return out


def _dag_step_tables(g: FramedDirectedGraph):
    """(forward, backward) tables: edge -> (b1, b2, companion-or-None).

    For a 1-labelled edge the branch threshold is F(b1); for a 2-labelled edge
    it is F(b1) - F(companion), where the companion is the parallel 1-edge.
    """
    tables = getattr(g, "_dag_step_tables", None)
    if tables is not None:
        return tables
    fwd, bwd = {}, {}
    for e, (t, h) in g.edges.items():
        if g.vertices[h] == "internal":
            outs = _labelled(g, g.edges_out(h))
            comp = None if g.labels[e] == 1 else _labelled(g, g.edges_in(h))[1]
            fwd[e] = (outs[1], outs[2], comp)
        if g.vertices[t] == "internal":
            ins = _labelled(g, g.edges_in(t))
            comp = None if g.labels[e] == 1 else _labelled(g, g.edges_out(t))[1]
            bwd[e] = (ins[1], ins[2], comp)
    tables = (fwd, bwd)
    object.__setattr__(g, "_dag_step_tables", tables)
    return tables


def dag_forward(F: DagFlow, e: str, c: Fraction) -> tuple[str, Fraction]:
    """The appendix Forward map: two branches read off the edge label."""
    c = parse_rational(c)
    fwd, _ = _dag_step_tables(F.graph)
    if e not in fwd:
        raise DomainError("boundary reached")
    b1, b2, comp = fwd[e]
    if comp is None:
        return (b1, c) if c <= F[b1] else (b2, c - F[b1])
    if c + F[comp] < F[b1]:
        return b1, c + F[comp]
    return b2, c + F[comp] - F[b1]


def dag_backward(F: DagFlow, e: str, c: Fraction) -> tuple[str, Fraction]:
    c = parse_rational(c)
    _, bwd = _dag_step_tables(F.graph)
    if e not in bwd:
        raise DomainError("boundary reached")
    b1, b2, comp = bwd[e]
    if comp is None:
        return (b1, c) if c <= F[b1] else (b2, c - F[b1])
    if c + F[comp] < F[b1]:
        return b1, c + F[comp]
    return b2, c + F[comp] - F[b1]


_MAX_STEPS = 1_000_000


def dag_trace_interval(F: DagFlow, e: str, c: Fraction):
    """DAG analogue of the quiver trace: walk Forward/Back on scaled integers
    and pull the branch constraints back to the start edge."""
    c = parse_rational(c)
    g = F.graph
    if not (0 <= c <= F[e]):
        raise DomainError(f"value {c} outside [0, F({e})]")
    den, ints = F.scaled()
    if c.denominator != 1 and den % c.denominator != 0:
        from math import lcm
        den2 = lcm(den, c.denominator)
        ints = {x: v * (den2 // den) for x, v in ints.items()}
        den = den2
    c_int = int(c * den)
    fwd_table, bwd_table = _dag_step_tables(g)

    def run(table, start_value):
        lo, hi = 0, ints[e]
        lo_open = hi_open = False
        shift = 0
        walk = []
        state, value = e, start_value
        visited = {(state, value)}
        for _ in range(_MAX_STEPS):
            data = table.get(state)
            if data is None:
                return walk, (lo, lo_open, hi, hi_open), "route"
            b1, b2, comp = data
            f1 = ints[b1]
            if comp is None:
                if value <= f1:
                    nxt, val, b, upper, strict = b1, value, f1, True, False
                else:
                    nxt, val, b, upper, strict = b2, value - f1, f1, False, True
            else:
                fc = ints[comp]
                if value + fc < f1:
                    nxt, val, b, upper, strict = b1, value + fc, f1 - fc, True, True
                else:
                    nxt, val, b, upper, strict = b2, value + fc - f1, f1 - fc, False, False
            b -= shift
            if upper:
                if (b, not strict) < (hi, not hi_open):
                    hi, hi_open = b, strict
            else:
                if (b, strict) > (lo, lo_open):
                    lo, lo_open = b, strict
            shift += val - value
            state, value = nxt, val
            if (state, value) == (e, start_value):
                return walk, (lo, lo_open, hi, hi_open), "band"
            if (state, value) in visited:
                return walk, (lo, lo_open, hi, hi_open), "rho"
            visited.add((state, value))
            walk.append(state)
        raise DomainError("flow tracing did not terminate")

    fwd, (lo, lo_open, hi, hi_open), kind = run(fwd_table, c_int)
    if kind == "band":
        interval = QInterval(Q(lo, den), Q(hi, den), lo_open, hi_open)
        walk = tuple((x, 1) for x in (e, *fwd))
        mt = MarkedTrail(Band.of(walk), walk, 0)
        return mt, interval, interval.length
    if kind == "rho":
        interval = QInterval(Q(lo, den), Q(hi, den), lo_open, hi_open)
        if interval.length != 0:
            raise AssertionError("positive-measure non-closing walk in a rational flow")
        return None, interval, Q(0)

    bwd, (lo2, lo2_open, hi2, hi2_open), kind = run(bwd_table, c_int)
    lo, lo_open = max((lo, lo_open), (lo2, lo2_open))
    hi, hi_open = min((hi, not hi_open), (hi2, not hi2_open))
    hi_open = not hi_open
    interval = QInterval(Q(lo, den), Q(hi, den), lo_open, hi_open)
    if kind in ("rho", "band"):
        if interval.length != 0:
            raise AssertionError("positive-measure non-closing walk in a rational flow")
        return None, interval, Q(0)
    walk = tuple((x, 1) for x in (*reversed(bwd), e, *fwd))
    mt = MarkedTrail(Route.of(walk), walk, len(bwd))
    return mt, interval, interval.length


def dag_decompose(F: DagFlow) -> dict[Trail, Fraction]:
    """Unique positive clique (plus band, when cyclic) combination of a flow."""
    g = F.graph
    coeffs: dict[Trail, Fraction] = {}
    for e in sorted(g.edges):
        if F[e] == 0:
            continue
        t, h = g.edges[e]
        if g.vertices[t] != "internal" and g.vertices[h] != "internal":
            # a source-to-sink edge is its own route
            coeffs[Route.of(((e, 1),))] = F[e]
            continue
        uncovered = [QInterval(Q(0), F[e])]
        while uncovered:
            u = uncovered.pop()
            probe = u.lo if u.lo == u.hi else (u.lo + u.hi) / 2
            mt, interval, length = dag_trace_interval(F, e, probe)
            if length > 0 and mt is not None:
                prev = coeffs.get(mt.trail)
                if prev is None:
                    coeffs[mt.trail] = length
                elif prev != length:
                    raise AssertionError(f"inconsistent coefficient for {mt.trail}")
            uncovered.extend(u.minus(interval))
    total = {x: Q(0) for x in g.edges}
    for tr, coeff in coeffs.items():
        for x, _s in tr.walk:
            total[x] += coeff
    if any(total[x] != F[x] for x in total):
        raise AssertionError("clique combination does not reconstruct the flow")
    return coeffs


def decomposition_json(coeffs: dict[Trail, Fraction]):
    from .flows import format_rational
    routes = {t: x for t, x in coeffs.items() if isinstance(t, Route)}
    bands = {t: x for t, x in coeffs.items() if isinstance(t, Band)}
    return {
        "routes": [{"trail": str(t), "coeff": format_rational(x)}
                   for t, x in sorted(routes.items(), key=lambda kv: trail_key(kv[0]))],
        "bands": [{"trail": str(t), "coeff": format_rational(x)}
                  for t, x in sorted(bands.items(), key=lambda kv: trail_key(kv[0]))],
    }


# -- framed-graph file format ------------------------------------------------------

def parse_framed_graph(text: str) -> FramedDirectedGraph:
    """Lines: ``vertex <id> [source|sink]`` and ``edge <id>: <u> -> <v> label <1|2>``."""
    vertices: dict[str, str] = {}
    edges: dict[str, tuple[str, str]] = {}
    labels: dict[str, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "vertex":
                vertices[parts[1]] = parts[2] if len(parts) > 2 else "internal"
            elif parts[0] == "edge":
                name = parts[1].rstrip(":")
                if parts[3] != "->" or parts[5] != "label":
                    raise StructuralError(f"line {ln}: expected 'edge id: u -> v label k'")
                edges[name] = (parts[2], parts[4])
                labels[name] = int(parts[6])
            else:
                raise StructuralError(f"line {ln}: unknown directive {parts[0]!r}")
        except (IndexError, ValueError):
            raise StructuralError(f"line {ln}: malformed line {raw!r}") from None
    g = FramedDirectedGraph(vertices, edges, labels)
    g.check_structure()
    return g


def serialize_framed_graph(g: FramedDirectedGraph) -> str:
    lines = []
    for v, kind in sorted(g.vertices.items()):
        lines.append(f"vertex {v}" + (f" {kind}" if kind != "internal" else ""))
    for e, (t, h) in sorted(g.edges.items()):
        lines.append(f"edge {e}: {t} -> {h} label {g.labels[e]}")
    return "\n".join(lines) + "\n"
