"""Gentle bound quivers and fringed quivers.

A gentle bound quiver has at most two arrows in/out of every vertex, length-two
monomial relations, and at every vertex each arrow has at most one relation
partner and at most one composition partner that is not a relation.  A fringed
quiver is the degree-completion: every internal vertex has in- and out-degree
exactly two, every fringe vertex carries a single arrow, and the relations at
each internal vertex pair the two incoming with the two outgoing arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class StructuralError(ValueError):
    """Input is not even syntactically a quiver (bad ids, dangling endpoints...)."""


class DomainError(ValueError):
    """Operation contract violated (unpaired quiver, bad flow, unknown trail...)."""


@dataclass(frozen=True)
class GentleQuiver:
    vertices: tuple[str, ...]
    arrows: dict[str, tuple[str, str]]          # id -> (tail, head)
    relations: frozenset[tuple[str, str]]       # ordered pairs (a, b), h(a) = t(b)

    def check_structure(self) -> None:
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise StructuralError("duplicate vertex id")
        for a, (t, h) in self.arrows.items():
            if t not in seen or h not in seen:
                raise StructuralError(f"arrow {a} has a dangling endpoint")
        for a, b in self.relations:
            if a not in self.arrows or b not in self.arrows:
                raise StructuralError(f"relation {a} {b} uses an unknown arrow")
            if self.arrows[a][1] != self.arrows[b][0]:
                raise StructuralError(f"relation {a} {b} between non-composable arrows")

    def arrows_out(self, v: str) -> list[str]:
        return sorted(a for a, (t, _h) in self.arrows.items() if t == v)

    def arrows_in(self, v: str) -> list[str]:
        return sorted(a for a, (_t, h) in self.arrows.items() if h == v)


def validate_gentle(q: GentleQuiver) -> list[str]:
    """Return all violated gentle-algebra axioms; an empty list means valid.

    Raises StructuralError for malformed input (that is not a validation
    outcome, it is a broken file).
    """
    q.check_structure()
    violations = []
    for v in q.vertices:
        if len(q.arrows_in(v)) > 2:
            violations.append(f"vertex {v} has in-degree > 2")
        if len(q.arrows_out(v)) > 2:
            violations.append(f"vertex {v} has out-degree > 2")
    for a in sorted(q.arrows):
        succ = [b for b in sorted(q.arrows) if q.arrows[a][1] == q.arrows[b][0]]
        strings = [b for b in succ if (a, b) not in q.relations]
        rels = [b for b in succ if (a, b) in q.relations]
        if len(strings) > 1:
            violations.append(f"arrow {a} has two relation-free continuations {strings}")
        if len(rels) > 1:
            violations.append(f"arrow {a} has two relation continuations {rels}")
        pred_strings = [b for b in sorted(q.arrows) if q.arrows[b][1] == q.arrows[a][0]
                        and (b, a) not in q.relations]
        pred_rels = [b for b in sorted(q.arrows) if q.arrows[b][1] == q.arrows[a][0]
                     and (b, a) in q.relations]
        if len(pred_strings) > 1:
            violations.append(f"arrow {a} has two relation-free predecessors {pred_strings}")
        if len(pred_rels) > 1:
            violations.append(f"arrow {a} has two relation predecessors {pred_rels}")
    if _has_relation_free_cycle(q):
        violations.append("oriented relation-free cycle (algebra is infinite-dimensional)")
    return violations


def _has_relation_free_cycle(q: GentleQuiver) -> bool:
    # DFS over arrows; edge a -> b when ab is composable and not a relation.
    succ = {a: [b for b in q.arrows
                if q.arrows[a][1] == q.arrows[b][0] and (a, b) not in q.relations]
            for a in q.arrows}
    color = dict.fromkeys(q.arrows, 0)

    def visit(a: str) -> bool:
        color[a] = 1
        for b in succ[a]:
            if color[b] == 1 or (color[b] == 0 and visit(b)):
                return True
        color[a] = 2
        return False

    return any(color[a] == 0 and visit(a) for a in q.arrows)


@dataclass(frozen=True)
class FringedQuiver:
    """A fringed quiver together with its relation pairs at each internal vertex.

    ``relation_pairs[v]`` holds the two ordered pairs ((a1, a2), (b1, b2)) that
    are relations at v; {a1, b1} are the incoming and {a2, b2} the outgoing
    arrows of v, so conservation of flow at v reads F(a1)+F(a2) = F(b1)+F(b2).
    """

    internal_vertices: tuple[str, ...]
    fringe_vertices: tuple[str, ...]
    arrows: dict[str, tuple[str, str]]
    relation_pairs: dict[str, tuple[tuple[str, str], tuple[str, str]]]

    _string_next: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_string_next", {})

    # -- basic structure ---------------------------------------------------

    @property
    def relations(self) -> frozenset[tuple[str, str]]:
        rels = set()
        for (p1, p2) in self.relation_pairs.values():
            rels.add(p1)
            rels.add(p2)
        return frozenset(rels)

    def is_internal(self, v: str) -> bool:
        return v in set(self.internal_vertices)

    def tail(self, a: str) -> str:
        return self.arrows[a][0]

    def head(self, a: str) -> str:
        return self.arrows[a][1]

    def internal_arrows(self) -> list[str]:
        vi = set(self.internal_vertices)
        return sorted(a for a, (t, h) in self.arrows.items() if t in vi and h in vi)

    def fringe_arrows(self) -> list[str]:
        return sorted(set(self.arrows) - set(self.internal_arrows()))

    def arrows_out(self, v: str) -> list[str]:
        return sorted(a for a, (t, _h) in self.arrows.items() if t == v)

    def arrows_in(self, v: str) -> list[str]:
        return sorted(a for a, (_t, h) in self.arrows.items() if h == v)

    def straight_route_count(self) -> int:
        return 2 * len(self.internal_vertices) - len(self.internal_arrows())

    # -- signed-arrow bookkeeping -------------------------------------------

    def signed_head(self, a: str, eps: int) -> str:
        return self.head(a) if eps == 1 else self.tail(a)

    def signed_tail(self, a: str, eps: int) -> str:
        return self.tail(a) if eps == 1 else self.head(a)

    def string_continuations(self, a: str, eps: int) -> list[tuple[str, int]]:
        """Signed arrows x^z such that a^eps x^z is a string (at most one per sign)."""
        key = (a, eps)
        cached = self._string_next.get(key)
        if cached is not None:
            return cached
        v = self.signed_head(a, eps)
        out: list[tuple[str, int]] = []
        if self.is_internal(v):
            rels = self.relations
            for b in self.arrows_out(v):
                if eps == 1 and (a, b) in rels:
                    continue
                if eps == -1 and b == a:
                    continue  # a^-1 a backtrack
                out.append((b, 1))
            for b in self.arrows_in(v):
                if eps == 1 and b == a:
                    continue  # a a^-1 backtrack
                if eps == -1 and (b, a) in rels:
                    continue  # (a^-1)(b^-1) = (ba)^-1 crosses the relation ba
                out.append((b, -1))
        self._string_next[key] = out
        return out

    def validate(self) -> None:
        """Check the fringed-quiver axioms; raise DomainError on failure."""
        vi, vf = set(self.internal_vertices), set(self.fringe_vertices)
        if vi & vf:
            raise DomainError("a vertex is both internal and fringe")
        for a, (t, h) in self.arrows.items():
            if t not in vi | vf or h not in vi | vf:
                raise StructuralError(f"arrow {a} has a dangling endpoint")
        for v in vf:
            deg = len(self.arrows_in(v)) + len(self.arrows_out(v))
            if deg != 1:
                raise DomainError(f"fringe vertex {v} has {deg} incident arrows (want 1)")
        for v in self.internal_vertices:
            ins, outs = self.arrows_in(v), self.arrows_out(v)
            if len(ins) != 2 or len(outs) != 2:
                raise DomainError(f"internal vertex {v} has degrees in={len(ins)} out={len(outs)} (want 2/2)")
            if v not in self.relation_pairs:
                raise DomainError(f"internal vertex {v} has no relation data")
            (a1, a2), (b1, b2) = self.relation_pairs[v]
            if sorted((a1, b1)) != ins or sorted((a2, b2)) != outs:
                raise DomainError(f"relation pairs at {v} do not match its incident arrows")
        base = GentleQuiver(
            vertices=tuple(sorted(vi | vf)),
            arrows=dict(self.arrows),
            relations=self.relations,
        )
        problems = validate_gentle(base)
        if problems:
            raise DomainError("; ".join(problems))

    def underlying_gentle(self) -> GentleQuiver:
        return GentleQuiver(
            vertices=tuple(sorted(set(self.internal_vertices) | set(self.fringe_vertices))),
            arrows=dict(self.arrows),
            relations=self.relations,
        )


def fringe(q: GentleQuiver) -> FringedQuiver:
    """Degree-complete a gentle quiver with fringe vertices and arrows.

    Fringe names are deterministic: vertex v gets fringe vertices v!in1, v!in2,
    v!out1, v!out2 and arrows v#i1, v#i2, v#o1, v#o2 as needed.  Relation slots
    forced by the existing arrows are respected; at an unconstrained vertex the
    first incoming slot is paired (as a relation) with the first outgoing slot.
    """
    problems = validate_gentle(q)
    if problems:
        raise DomainError("not a valid gentle quiver: " + "; ".join(problems))

    arrows = dict(q.arrows)
    fringe_vertices: list[str] = []
    relation_pairs: dict[str, tuple[tuple[str, str], tuple[str, str]]] = {}

    for v in sorted(q.vertices):
        ins = list(q.arrows_in(v))
        outs = list(q.arrows_out(v))
        for k in range(2 - len(ins)):
            fv, fa = f"{v}!in{k + 1}", f"{v}#i{k + 1}"
            fringe_vertices.append(fv)
            arrows[fa] = (fv, v)
            ins.append(fa)
        for k in range(2 - len(outs)):
            fv, fa = f"{v}!out{k + 1}", f"{v}#o{k + 1}"
            fringe_vertices.append(fv)
            arrows[fa] = (v, fv)
            outs.append(fa)
        relation_pairs[v] = _complete_relations(q, v, ins, outs)

    f = FringedQuiver(
        internal_vertices=tuple(sorted(q.vertices)),
        fringe_vertices=tuple(fringe_vertices),
        arrows=arrows,
        relation_pairs=relation_pairs,
    )
    f.validate()
    return f


def _complete_relations(q: GentleQuiver, v: str, ins: list[str], outs: list[str]):
    """Pick the perfect matching ins x outs extending the base quiver's data."""
    m1 = ((ins[0], outs[0]), (ins[1], outs[1]))
    m2 = ((ins[0], outs[1]), (ins[1], outs[0]))

    def consistent(m) -> bool:
        rel = set(m)
        for a in ins:
            for b in outs:
                if a in q.arrows and b in q.arrows and q.arrows[a][1] == q.arrows[b][0]:
                    # existing composable pair: its relation status is already fixed
                    if ((a, b) in q.relations) != ((a, b) in rel):
                        return False
        return True

    for m in (m1, m2):
        if consistent(m):
            return m
    raise DomainError(f"cannot complete relations at vertex {v}")


def find_pairing(f: FringedQuiver) -> dict[str, int] | None:
    """Propagate arrow labels in {1, 2}; None when the quiver is not paired.

    The label of the lexicographically first arrow of each connected component
    is 1, which fixes one of the two pairings per component.
    """
    psi: dict[str, int] = {}
    rels = f.relations
    # Composability graph on arrows: a ~ b whenever ab or ba is composable.
    constraints: dict[str, list[tuple[str, bool]]] = {a: [] for a in f.arrows}
    for a in f.arrows:
        for b in f.arrows:
            if f.head(a) == f.tail(b):
                differ = (a, b) in rels
                constraints[a].append((b, differ))
                constraints[b].append((a, differ))
    for start in sorted(f.arrows):
        if start in psi:
            continue
        psi[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, differ in constraints[a]:
                want = (3 - psi[a]) if differ else psi[a]
                if b in psi:
                    if psi[b] != want:
                        return None
                else:
                    psi[b] = want
                    stack.append(b)
    return psi


def is_representation_finite(f: FringedQuiver) -> bool:
    """True iff no band exists: the signed-arrow transition graph is acyclic."""
    nodes = [(a, e) for a in f.arrows for e in (1, -1)]
    color = dict.fromkeys(nodes, 0)

    def visit(n) -> bool:
        color[n] = 1
        for m in f.string_continuations(*n):
            if color[m] == 1 or (color[m] == 0 and visit(m)):
                return True
        color[n] = 2
        return False

    return not any(color[n] == 0 and visit(n) for n in nodes)


# -- quiver file format ------------------------------------------------------

def _strip_comment(line: str) -> str:
    """Drop a trailing comment; '#' only opens one at line start or after a
    space, since fringe-arrow ids contain '#' themselves."""
    if line.startswith("#"):
        return ""
    for i, ch in enumerate(line):
        if ch == "#" and line[i - 1] in " \t":
            return line[:i]
    return line


def parse_quiver_file(text: str):
    """Parse the line-oriented quiver format.

    Returns a GentleQuiver, or a FringedQuiver when the file carries the
    ``fringed`` section marker (in which case relation pairs are rebuilt from
    the listed relations).
    """
    vertices: list[str] = []
    fringe_vs: list[str] = []
    arrows: dict[str, tuple[str, str]] = {}
    relations: set[tuple[str, str]] = set()
    fringed_marker = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line == "fringed":
            fringed_marker = True
            continue
        parts = line.split()
        try:
            if parts[0] == "vertex":
                vertices.append(parts[1])
            elif parts[0] == "fringe-vertex":
                fringe_vs.append(parts[1])
            elif parts[0] == "arrow":
                # arrow <id>: <tail> -> <head>
                name = parts[1].rstrip(":")
                if parts[3] != "->":
                    raise StructuralError(f"line {ln}: expected '->'")
                if name in arrows:
                    raise StructuralError(f"line {ln}: duplicate arrow id {name}")
                arrows[name] = (parts[2], parts[4])
            elif parts[0] == "relation":
                relations.add((parts[1], parts[2]))
            else:
                raise StructuralError(f"line {ln}: unknown directive {parts[0]!r}")
        except IndexError:
            raise StructuralError(f"line {ln}: malformed line {raw!r}") from None
    if fringe_vs and not fringed_marker:
        raise StructuralError("fringe-vertex outside a 'fringed' file")
    if not fringed_marker:
        q = GentleQuiver(tuple(vertices), arrows, frozenset(relations))
        q.check_structure()
        return q
    return _fringed_from_parts(vertices, fringe_vs, arrows, relations)


def _fringed_from_parts(vertices, fringe_vs, arrows, relations):
    relation_pairs = {}
    f0 = FringedQuiver(tuple(vertices), tuple(fringe_vs), arrows, {})
    for v in vertices:
        ins, outs = f0.arrows_in(v), f0.arrows_out(v)
        pairs = sorted((a, b) for (a, b) in relations
                       if a in ins and b in outs)
        if len(pairs) != 2:
            raise DomainError(f"internal vertex {v} needs exactly 2 relations, found {len(pairs)}")
        relation_pairs[v] = (pairs[0], pairs[1])
    leftover = relations - {p for ps in relation_pairs.values() for p in ps}
    if leftover:
        raise DomainError(f"relations not located at any internal vertex: {sorted(leftover)}")
    f = FringedQuiver(tuple(vertices), tuple(fringe_vs), arrows, relation_pairs)
    f.validate()
    return f


def serialize_fringed(f: FringedQuiver) -> str:
    lines = ["fringed"]
    lines += [f"vertex {v}" for v in sorted(f.internal_vertices)]
    lines += [f"fringe-vertex {v}" for v in sorted(f.fringe_vertices)]
    lines += [f"arrow {a}: {t} -> {h}" for a, (t, h) in sorted(f.arrows.items())]
    lines += [f"relation {a} {b}" for a, b in sorted(f.relations)]
    return "\n".join(lines) + "\n"


def serialize_gentle(q: GentleQuiver) -> str:
    lines = [f"vertex {v}" for v in q.vertices]
    lines += [f"arrow {a}: {t} -> {h}" for a, (t, h) in sorted(q.arrows.items())]
    lines += [f"relation {a} {b}" for a, b in sorted(q.relations)]
    return "\n".join(lines) + "\n"
