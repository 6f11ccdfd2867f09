"""Turbulence-polyhedron and g-polyhedron presentations, faces and facets.

Vertices and recession rays come from elementary trails; faces of the
g-polyhedron come from closed arrow sets, and its facets from barely crooked
ones.  No convex-hull engine: everything is read off the combinatorics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .flows import Flow, format_rational, indicator
from .quiver import DomainError, FringedQuiver
from .trails import (
    Route,
    Trail,
    elementary_bands,
    elementary_routes,
    g_vector,
    is_straight,
    straight_routes,
)

Q = Fraction


def turbulence_dimension(f: FringedQuiver) -> int:
    return len(f.arrows) - len(f.internal_vertices) - 1


@dataclass
class PolyhedronPresentation:
    ambient: list[str]                      # coordinate labels
    vertices: list[tuple[Trail, dict]]      # (labelling trail, rational vector)
    rays: list[tuple[Trail, dict]]
    dimension: int

    def vertex_vectors(self) -> list[dict]:
        return [v for _t, v in self.vertices]

    def ray_vectors(self) -> list[dict]:
        return [v for _t, v in self.rays]

    def as_json(self):
        def vec(v):
            return {k: format_rational(Q(x)) for k, x in sorted(v.items())}
        return {
            "ambient": list(self.ambient),
            "dimension": self.dimension,
            "vertices": [{"trail": str(t), "vector": vec(v)} for t, v in self.vertices],
            "rays": [{"trail": str(t), "vector": vec(v)} for t, v in self.rays],
        }


def turbulence_presentation(f: FringedQuiver) -> PolyhedronPresentation:
    """Vertices are indicators of elementary routes; rays of elementary bands."""
    verts = [(p, dict(indicator(f, p).values)) for p in elementary_routes(f)]
    rays = [(b, dict(indicator(f, b).values)) for b in elementary_bands(f)]
    return PolyhedronPresentation(
        ambient=sorted(f.arrows),
        vertices=verts,
        rays=rays,
        dimension=turbulence_dimension(f),
    )


def phi(f: FringedQuiver, vec: dict[str, Fraction]) -> dict[str, Fraction]:
    """The quotient map (e_alpha -> (e_tail - e_head)/2, fringe endpoints -> 0)."""
    out = {v: Q(0) for v in f.internal_vertices}
    for a, x in vec.items():
        if a not in f.arrows:
            raise DomainError(f"unknown arrow {a}")
        x = Q(x)
        t, h = f.arrows[a]
        if f.is_internal(t):
            out[t] += x / 2
        if f.is_internal(h):
            out[h] -= x / 2
    return out


def g_polyhedron_presentation(f: FringedQuiver) -> PolyhedronPresentation:
    """Vertices are g-vectors of elementary bending routes; rays of elementary bands."""
    verts = []
    for p in elementary_routes(f):
        if is_straight(p):
            continue
        verts.append((p, {v: Q(x) for v, x in g_vector(f, p).items()}))
    rays = [(b, {v: Q(x) for v, x in g_vector(f, b).items()}) for b in elementary_bands(f)]
    seen = [v for _t, v in verts]
    if any(seen[i] == seen[j] for i in range(len(seen)) for j in range(i + 1, len(seen))):
        raise AssertionError("elementary bending routes produced equal g-vectors")
    return PolyhedronPresentation(
        ambient=sorted(f.internal_vertices),
        vertices=verts,
        rays=rays,
        dimension=len(f.internal_vertices),
    )


# -- closed and crooked arrow sets ----------------------------------------------

def _restricted_reachable(f: FringedQuiver, allowed: set[str]):
    """Forward-reachable signed arrows from fringe starts, within `allowed`."""
    starts = [(a, 1) for a in allowed if not f.is_internal(f.tail(a))]
    starts += [(a, -1) for a in allowed if not f.is_internal(f.head(a))]
    seen = set(starts)
    stack = list(starts)
    while stack:
        node = stack.pop()
        for nxt in f.string_continuations(*node):
            if nxt[0] in allowed and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _restricted_cyclic(f: FringedQuiver, allowed: set[str]) -> set[str]:
    """Arrows lying on a cycle of the transition graph restricted to `allowed`."""
    from .trails import _cyclic_core

    class _View:
        def __init__(self, base):
            self.base = base

        def string_continuations(self, a, e):
            return [x for x in self.base.string_continuations(a, e) if x[0] in allowed]

    nodes = [(a, e) for a in sorted(allowed) for e in (1, -1)]
    core = _cyclic_core(_View(f), nodes)
    return {a for a, _e in core}


def closure(f: FringedQuiver, W: set[str]) -> set[str]:
    """Smallest closed arrow set containing W (all of E when no W-avoiding
    route survives, matching the empty face)."""
    for a in W:
        if a not in f.arrows:
            raise DomainError(f"unknown arrow {a}")
    allowed = set(f.arrows) - set(W)
    reach = _restricted_reachable(f, allowed)
    on_route = {a for a, e in reach if (a, -e) in reach}
    if not on_route:
        return set(f.arrows)
    on_band = _restricted_cyclic(f, allowed)
    return set(f.arrows) - (on_route | on_band)


def is_closed(f: FringedQuiver, W: set[str]) -> bool:
    if set(W) == set(f.arrows):
        return False  # no unit flow vanishes everywhere; E indexes the empty face
    return closure(f, W) == set(W)


def crookedness(f: FringedQuiver, W: set[str]) -> str:
    """Classify a closed arrow set by its straight-route intersection counts."""
    if not is_closed(f, W):
        raise DomainError("arrow set is not closed")
    counts = [sum(1 for a, _e in s.walk if a in W) for s in straight_routes(f)]
    if any(c == 0 for c in counts):
        return "not-crooked"
    if all(c == 1 for c in counts):
        return "barely-crooked"
    return "crooked"


@dataclass
class HalfSpace:
    coeffs: dict[str, Fraction]   # over internal vertices
    relation: str                 # "<=" or ">="
    rhs: Fraction
    form: str                     # "S" or "T"

    def evaluate(self, x: dict[str, Fraction]) -> Fraction:
        return sum((self.coeffs[v] * Q(x.get(v, 0)) for v in self.coeffs), Q(0))

    def satisfied_by(self, x: dict[str, Fraction]) -> bool:
        val = self.evaluate(x)
        return val <= self.rhs if self.relation == "<=" else val >= self.rhs

    def tight_at(self, x: dict[str, Fraction]) -> bool:
        return self.evaluate(x) == self.rhs

    def as_json(self):
        return {
            "coeffs": {v: format_rational(c) for v, c in sorted(self.coeffs.items())},
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "form": self.form,
        }


def _suffix_weight(f: FringedQuiver, W: set[str], y: str) -> tuple[int, int]:
    """(#W-arrows weakly after y on its straight route, #W-arrows on the route)."""
    from .trails import straight_route_through
    s = straight_route_through(f, y)
    walk = s.walk if any(e == 1 for _a, e in s.walk) else tuple((a, -e) for a, e in reversed(s.walk))
    arrows = [a for a, _e in walk]
    i = arrows.index(y)
    return sum(1 for a in arrows[i:] if a in W), sum(1 for a in arrows if a in W)


def s_coefficients(f: FringedQuiver, W: set[str]) -> dict[str, Fraction]:
    """The S_v facet data of a crooked arrow set.

    S_v sums, over the two arrows y leaving v, the fraction of its straight
    route's W-arrows sitting weakly after v, recentered by 1/2.
    """
    out = {}
    for v in f.internal_vertices:
        total = Q(0)
        for y in f.arrows_out(v):
            after, on_route = _suffix_weight(f, W, y)
            if on_route == 0:
                raise DomainError(f"arrow set misses the straight route of {y} (not crooked)")
            total += Q(after, on_route) - Q(1, 2)
        out[v] = total
    return out


def g_face(f: FringedQuiver, W: set[str]) -> HalfSpace:
    """Face-defining half-space of the g-polyhedron for a crooked arrow set."""
    kind = crookedness(f, W)
    if kind == "not-crooked":
        raise DomainError("arrow set is not crooked")
    return HalfSpace(coeffs=s_coefficients(f, W), relation=">=", rhs=Q(-1), form="S")


def g_facet(f: FringedQuiver, W: set[str]) -> HalfSpace:
    """Facet-defining half-space for a barely crooked arrow set, in the integer
    form sum T_v x(v) <= 1 with T_v = -S_v in {-1, 0, 1}."""
    if crookedness(f, W) != "barely-crooked":
        raise DomainError("arrow set is not barely crooked")
    coeffs = {v: -s for v, s in s_coefficients(f, W).items()}
    for v, c in coeffs.items():
        if c not in (-1, 0, 1):
            raise AssertionError(f"non-integer facet coefficient {c} at {v}")
    return HalfSpace(coeffs=coeffs, relation="<=", rhs=Q(1), form="T")


def barely_crooked_sets(f: FringedQuiver) -> list[frozenset[str]]:
    """All barely crooked arrow sets: one arrow per straight route, then closed."""
    from itertools import product
    routes = straight_routes(f)
    choices = [[a for a, _e in s.walk] for s in routes]
    out = []
    for combo in product(*choices):
        W = frozenset(combo)
        if len(W) == len(routes) and is_closed(f, set(W)):
            out.append(W)
    return sorted(out, key=lambda s: sorted(s))


def g_facets(f: FringedQuiver) -> list[tuple[frozenset[str], HalfSpace]]:
    return [(W, g_facet(f, set(W))) for W in barely_crooked_sets(f)]


# -- cells and unimodularity --------------------------------------------------------

def clique_cell(f: FringedQuiver, routes) -> list[tuple[Route, dict]]:
    return [(p, dict(indicator(f, p).values)) for p in routes]


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    m = [row[:] for row in rows]
    det = Q(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Q(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return det


def unimodularity_check(f: FringedQuiver, clique_routes) -> bool:
    """|det| of the g-vectors of the bending routes of a maximal reduced clique."""
    bending = [p for p in clique_routes if not is_straight(p)]
    n = len(f.internal_vertices)
    if len(bending) != n:
        raise DomainError(f"expected {n} bending routes, got {len(bending)}")
    order = sorted(f.internal_vertices)
    rows = [[Q(g_vector(f, p)[v]) for v in order] for p in bending]
    return abs(_det(rows)) == 1


def flow_vector(F: Flow) -> dict[str, Fraction]:
    return dict(F.values)
