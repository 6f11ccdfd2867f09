"""Compatibility graphs, maximal cliques and bundles, band-stable cliques.

Straight routes are compatible with every trail, so every maximal clique or
bundle contains them all; the search happens on bending trails only and the
straight routes are re-attached afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

from .quiver import DomainError, FringedQuiver
from .trails import (
    Band,
    Route,
    Trail,
    calculus,
    countercurrent_compare,
    enumerate_bands,
    enumerate_routes,
    is_straight,
    markings_at,
    straight_routes,
    trail_key,
)


@dataclass(frozen=True)
class Clique:
    routes: frozenset[Route]

    def reduced(self) -> "Clique":
        return Clique(frozenset(p for p in self.routes if not is_straight(p)))

    def sorted_routes(self) -> list[Route]:
        return sorted(self.routes, key=trail_key)

    def as_json(self):
        return [str(p) for p in self.sorted_routes()]


@dataclass(frozen=True)
class Bundle:
    trails: frozenset[Trail]

    @property
    def routes(self) -> frozenset[Route]:
        return frozenset(t for t in self.trails if isinstance(t, Route))

    @property
    def bands(self) -> frozenset[Band]:
        return frozenset(t for t in self.trails if isinstance(t, Band))

    def reduced(self) -> "Bundle":
        return Bundle(frozenset(t for t in self.trails if not is_straight(t)))

    def sorted_trails(self) -> list[Trail]:
        return sorted(self.trails, key=trail_key)

    def as_json(self):
        return [str(t) for t in self.sorted_trails()]


def bending_route_universe(f: FringedQuiver, route_bound: int) -> list[Route]:
    calc = calculus(f)
    return sorted((p for p in enumerate_routes(f, route_bound)
                   if not is_straight(p) and calc.self_compatible(p)),
                  key=trail_key)


def band_universe(f: FringedQuiver, band_bound: int) -> list[Band]:
    calc = calculus(f)
    return sorted((b for b in enumerate_bands(f, band_bound) if calc.self_compatible(b)),
                  key=trail_key)


def _compat_sets(f: FringedQuiver, nodes: list[Trail]) -> dict[Trail, set[Trail]]:
    calc = calculus(f)
    adj: dict[Trail, set[Trail]] = {t: set() for t in nodes}
    for i, p in enumerate(nodes):
        for q in nodes[i + 1:]:
            if calc.compatible(p, q):
                adj[p].add(q)
                adj[q].add(p)
    return adj


def _bron_kerbosch(nodes: list[Trail], adj) -> list[frozenset[Trail]]:
    """Pivoted Bron-Kerbosch; deterministic through the canonical node order."""
    cliques: list[frozenset[Trail]] = []
    order = {t: i for i, t in enumerate(nodes)}

    def expand(r: set, p: set, x: set):
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), -order[u]))
        for v in sorted(p - adj[pivot], key=lambda t: order[t]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(nodes), set())
    return cliques


def maximal_cliques(f: FringedQuiver, route_bound: int) -> list[Clique]:
    """Maximal cliques within the bounded route universe, straight routes included."""
    if route_bound < 1:
        raise DomainError("route_bound must be >= 1")
    straights = straight_routes(f)
    bending = bending_route_universe(f, route_bound)
    if not bending:
        return [Clique(frozenset(straights))]
    adj = _compat_sets(f, bending)
    return sorted((Clique(frozenset(straights) | c) for c in _bron_kerbosch(bending, adj)),
                  key=lambda k: tuple(trail_key(t) for t in k.sorted_routes()))


def maximal_bundles(f: FringedQuiver, route_bound: int, band_bound: int) -> list[Bundle]:
    """Maximal bundles within the bounded trail universe, straight routes included."""
    if route_bound < 1 or band_bound < 1:
        raise DomainError("bounds must be >= 1")
    straights = straight_routes(f)
    nodes: list[Trail] = list(bending_route_universe(f, route_bound))
    nodes += band_universe(f, band_bound)
    if not nodes:
        return [Bundle(frozenset(straights))]
    adj = _compat_sets(f, nodes)
    return sorted((Bundle(frozenset(straights) | c) for c in _bron_kerbosch(nodes, adj)),
                  key=lambda k: tuple(trail_key(t) for t in k.sorted_trails()))


def band_stable_cliques(f: FringedQuiver, route_bound: int, band_bound: int) -> list[Clique]:
    """Cliques K (containing all straight routes) such that every compatible
    route extension kills some K-compatible band.

    Stability reduces to single-route extensions: a clique K' ⊋ K contains a
    route q ∉ K, and a K-compatible band kissing q is not K'-compatible.
    """
    straights = set(straight_routes(f))
    bending = bending_route_universe(f, route_bound)
    bands = band_universe(f, band_bound)
    calc = calculus(f)
    adj = _compat_sets(f, bending)

    # candidate cliques = subsets of maximal cliques of the bending graph
    maximal = (_bron_kerbosch(bending, adj) if bending else [frozenset()])
    seen: set[frozenset[Route]] = set()
    for m in maximal:
        members = sorted(m, key=trail_key)
        for mask in range(1 << len(members)):
            seen.add(frozenset(members[i] for i in range(len(members)) if mask >> i & 1))

    stable = []
    for bend in seen:
        compat_bands = [b for b in bands if all(calc.compatible(b, p) for p in bend)]
        extensions = [q for q in bending if q not in bend
                      and all(calc.compatible(q, p) for p in bend)]
        ok = all(any(not calc.compatible(b, q) for b in compat_bands) for q in extensions)
        if ok:
            stable.append(Clique(frozenset(straights) | bend))
    return sorted(stable, key=lambda k: tuple(trail_key(t) for t in k.sorted_routes()))


def distinguished_arrows(f: FringedQuiver, bundle: Bundle, p: Trail) -> set[str]:
    """Arrows at which a marking of p is countercurrent-maximum in the bundle."""
    if p not in bundle.trails:
        raise DomainError("trail is not a member of the bundle")
    out = set()
    for a in sorted({x for x, _e in p.walk}):
        marks = [m for t in bundle.sorted_trails() for m in markings_at(t, a, 1)]
        top = marks[0]
        for m in marks[1:]:
            if countercurrent_compare(f, top, m) < 0:
                top = m
        if top.trail == p:
            out.add(a)
    return out


def avoided_arrows(f: FringedQuiver, trails) -> set[str]:
    used = {a for t in trails for a, _e in t.walk}
    return set(f.arrows) - used
