"""Exact rational flows and the arrow-flow tracing algorithm.

A flow assigns a nonnegative rational to every arrow so that at each internal
vertex the two relation pairs carry equal sums.  Repeatedly applying the
Forward/Back maps to an arrow-flow (signed arrow, value) walks out a marked
route or band; the interval of start values producing the same marked trail
gives its coefficient in the unique positive bundle combination realizing the
flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quiver import DomainError, FringedQuiver
from .trails import (
    Band,
    MarkedTrail,
    Route,
    SignedArrow,
    Trail,
    countercurrent_compare,
    markings_at,
    trail_key,
)

Q = Fraction


def parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DomainError(f"not an exact rational: {x!r} (floats are not accepted)")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# -- intervals ----------------------------------------------------------------

@dataclass(frozen=True)
class QInterval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def is_empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open))

    @property
    def length(self) -> Fraction:
        return Q(0) if self.is_empty() else self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or (x == self.lo and self.lo_open):
            return False
        if x > self.hi or (x == self.hi and self.hi_open):
            return False
        return True

    def intersect(self, other: "QInterval") -> "QInterval":
        # lower bounds: larger wins, open beats closed at a tie
        if (other.lo, other.lo_open) > (self.lo, self.lo_open):
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open
        # upper bounds: smaller wins, open beats closed at a tie
        if (other.hi, not other.hi_open) < (self.hi, not self.hi_open):
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open
        return QInterval(lo, hi, lo_open, hi_open)

    def minus(self, other: "QInterval") -> list["QInterval"]:
        """Set difference self \\ other as up to two intervals (other must
        meet self, which is always the case for probe tiles)."""
        pieces = [
            QInterval(self.lo, other.lo, self.lo_open, not other.lo_open),
            QInterval(other.hi, self.hi, not other.hi_open, self.hi_open),
        ]
        return [p for p in pieces if not p.is_empty()]

    def as_json(self):
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
        }

    def __str__(self) -> str:
        if self.is_empty():
            return "{}"
        if self.lo == self.hi:
            return "{%s}" % format_rational(self.lo)
        return "%s%s,%s%s" % ("(" if self.lo_open else "[", format_rational(self.lo),
                              format_rational(self.hi), ")" if self.hi_open else "]")


# -- flows ----------------------------------------------------------------------

class Flow:
    """A nonnegative rational flow on a fringed quiver."""

    def __init__(self, f: FringedQuiver, values: dict[str, Fraction] | None = None):
        self.quiver = f
        vals = {a: Q(0) for a in f.arrows}
        for a, x in (values or {}).items():
            if a not in vals:
                raise DomainError(f"flow value on unknown arrow {a}")
            vals[a] = parse_rational(x)
        self.values = vals
        self._scaled: tuple[int, dict[str, int]] | None = None
        self._validate()

    def scaled(self) -> tuple[int, dict[str, int]]:
        """(common denominator, integer flow values): tracing runs on ints."""
        if self._scaled is None:
            from math import lcm
            den = lcm(*(x.denominator for x in self.values.values()), 1)
            self._scaled = (den, {a: int(x * den) for a, x in self.values.items()})
        return self._scaled

    def _validate(self) -> None:
        for a, x in self.values.items():
            if x < 0:
                raise DomainError(f"negative flow on arrow {a}")
        for v, ((a1, a2), (b1, b2)) in self.quiver.relation_pairs.items():
            if self[a1] + self[a2] != self[b1] + self[b2]:
                raise DomainError(f"conservation of flow fails at vertex {v}")

    def __getitem__(self, a: str) -> Fraction:
        return self.values[a]

    @property
    def strength(self) -> Fraction:
        return sum((self[a] for a in self.quiver.fringe_arrows()), Q(0)) / 2

    def is_vortex(self) -> bool:
        return self.strength == 0

    def plus(self, other: "Flow", scale: Fraction = Q(1)) -> "Flow":
        vals = {a: self[a] + scale * other[a] for a in self.values}
        return Flow(self.quiver, vals)

    def as_json(self):
        return {a: format_rational(x) for a, x in sorted(self.values.items()) if x != 0}

    def __eq__(self, other) -> bool:
        return isinstance(other, Flow) and self.values == other.values


def indicator(f: FringedQuiver, t: Trail) -> Flow:
    """Arrow-use counts of a trail; a unit flow for routes, a vortex for bands."""
    from .trails import is_band_walk, is_route_walk
    ok = is_band_walk(f, t.walk) if isinstance(t, Band) else is_route_walk(f, t.walk)
    if not ok:
        raise DomainError(f"not a trail of this quiver: {t}")
    vals: dict[str, Fraction] = {}
    for a, _e in t.walk:
        vals[a] = vals.get(a, Q(0)) + 1
    return Flow(f, vals)


def flow_from_json(f: FringedQuiver, data: dict) -> Flow:
    return Flow(f, {a: parse_rational(x) for a, x in data.items()})


# -- Forward / Back -------------------------------------------------------------

def _forward_data(f: FringedQuiver, a: str, eps: int):
    """The arrows (alpha', beta, beta') governing Forward at the head of a^eps."""
    v = f.signed_head(a, eps)
    if not f.is_internal(v):
        raise DomainError("boundary reached")
    p1, p2 = f.relation_pairs[v]
    if eps == 1:
        mine, other = (p1, p2) if p1[0] == a else (p2, p1)
        beta_prime = mine[1]       # a . beta' is the relation through a
        beta, alpha_prime = other  # beta . alpha' is the other relation
    else:
        mine, other = (p1, p2) if p1[1] == a else (p2, p1)
        beta_prime = mine[0]       # beta' . a is the relation into a
        beta, alpha_prime = other
    return alpha_prime, beta, beta_prime


def _backward_data(f: FringedQuiver, a: str, eps: int):
    """The arrows governing Back at the tail of a^eps (mirror of Forward)."""
    v = f.signed_tail(a, eps)
    if not f.is_internal(v):
        raise DomainError("boundary reached")
    p1, p2 = f.relation_pairs[v]
    if eps == 1:
        mine, other = (p1, p2) if p1[1] == a else (p2, p1)
        beta_prime = mine[0]       # beta' . a is the relation into a
        alpha_prime, beta = other  # alpha' . beta is the other relation
    else:
        mine, other = (p1, p2) if p1[0] == a else (p2, p1)
        beta_prime = mine[1]       # a . beta' is the relation through a
        alpha_prime, beta = other
    return alpha_prime, beta, beta_prime


def _step_tables(f: FringedQuiver):
    """Per-quiver cache of the (alpha', beta, beta') data of every signed arrow."""
    tables = getattr(f, "_flow_step_tables", None)
    if tables is None:
        fwd, bwd = {}, {}
        for a in f.arrows:
            for eps in (1, -1):
                if f.is_internal(f.signed_head(a, eps)):
                    fwd[(a, eps)] = _forward_data(f, a, eps)
                if f.is_internal(f.signed_tail(a, eps)):
                    bwd[(a, eps)] = _backward_data(f, a, eps)
        tables = (fwd, bwd)
        object.__setattr__(f, "_flow_step_tables", tables)
    return tables


def _step(F: Flow, sa: SignedArrow, c: Fraction, data_fn):
    """One Forward (or Back) application.

    Returns (next signed arrow, next value, constraint) where the constraint
    (op, bound) describes on the *current* value the branch that fired.
    """
    a, eps = sa
    alpha_prime, beta, beta_prime = data_fn(F.quiver, a, eps)
    fa, fb = F[alpha_prime], F[beta_prime]
    if eps == 1:
        if c <= fa:
            return (alpha_prime, 1), c, ("le", fa)
        return (beta, -1), c - fa, ("gt", fa)
    if c + fb < fa:
        return (alpha_prime, 1), c + fb, ("lt", fa - fb)
    return (beta, -1), c + fb - fa, ("ge", fa - fb)


def forward(F: Flow, sa: SignedArrow, c: Fraction) -> tuple[SignedArrow, Fraction]:
    nxt, val, _ = _step(F, sa, c, _forward_data)
    return nxt, val


def backward(F: Flow, sa: SignedArrow, c: Fraction) -> tuple[SignedArrow, Fraction]:
    nxt, val, _ = _step(F, sa, c, _backward_data)
    return nxt, val


_MAX_STEPS = 1_000_000


def _check_arrow_flow(F: Flow, sa: SignedArrow, c: Fraction) -> None:
    a, _eps = sa
    if a not in F.quiver.arrows:
        raise DomainError(f"unknown arrow {a}")
    if not (0 <= c <= F[a]):
        raise DomainError(f"value {c} outside [0, F({a})={F[a]}]")


def trace(F: Flow, sa: SignedArrow, c: Fraction) -> MarkedTrail:
    """The marked route or band walked out by the arrow-flow (sa, c)."""
    mt, _interval, _length = trace_interval(F, sa, c)
    if mt is None:
        raise DomainError(
            "the walk at this boundary value never closes (isolated non-trail point)")
    return mt


class _IntSweep:
    """One direction of the trace, on integers scaled by a common denominator.

    Bounds on the *start* value accumulate as (lo, lo_open, hi, hi_open); the
    value at step j is start + shift_j as long as the same branches fire.
    """

    def __init__(self, values: dict[str, int], table, cap: int):
        self.iv = values
        self.table = table
        self.lo, self.hi = 0, cap
        self.lo_open = self.hi_open = False
        self.shift = 0

    def step(self, state: SignedArrow, value: int):
        a, eps = state
        data = self.table.get(state)
        if data is None:
            return None
        alpha_prime, beta, beta_prime = data
        fa = self.iv[alpha_prime]
        if eps == 1:
            if value <= fa:
                nxt, val, b, upper, strict = (alpha_prime, 1), value, fa, True, False
            else:
                nxt, val, b, upper, strict = (beta, -1), value - fa, fa, False, True
        else:
            fb = self.iv[beta_prime]
            if value + fb < fa:
                nxt, val, b, upper, strict = (alpha_prime, 1), value + fb, fa - fb, True, True
            else:
                nxt, val, b, upper, strict = (beta, -1), value + fb - fa, fa - fb, False, False
        b -= self.shift
        if upper:
            if (b, not strict) < (self.hi, not self.hi_open):
                self.hi, self.hi_open = b, strict
        else:
            if (b, strict) > (self.lo, self.lo_open):
                self.lo, self.lo_open = b, strict
        self.shift += val - value
        return nxt, val


def trace_interval(F: Flow, sa: SignedArrow, c: Fraction):
    """Trace the arrow-flow (sa, c), pulling branch constraints back to the start.

    Returns (marked trail, interval of start values giving this marked trail,
    interval length).  Each Forward/Back branch applies an affine shift to the
    value, so every constraint translates into exact bounds on the start value.
    """
    c = parse_rational(c)
    _check_arrow_flow(F, sa, c)
    f = F.quiver
    den, ints = F.scaled()
    if c.denominator != 1 and den % c.denominator != 0:
        from math import lcm
        den2 = lcm(den, c.denominator)
        ints = {a: v * (den2 // den) for a, v in ints.items()}
        den = den2
    c_int = int(c * den)
    fwd_table, bwd_table = _step_tables(f)

    def run(table, start_value):
        sweep = _IntSweep(ints, table, ints[sa[0]])
        walk: list[SignedArrow] = []
        state, value = sa, start_value
        visited = {(state, value)}
        for _ in range(_MAX_STEPS):
            nxt = sweep.step(state, value)
            if nxt is None:
                return walk, sweep, "route"
            state, value = nxt
            if (state, value) == (sa, start_value):
                return walk, sweep, "band"
            if (state, value) in visited:
                return walk, sweep, "rho"
            visited.add((state, value))
            walk.append(state)
        raise DomainError("flow tracing did not terminate")

    def finish(lo, lo_open, hi, hi_open):
        interval = QInterval(Q(lo, den), Q(hi, den), lo_open, hi_open)
        return interval

    fwd, sweep_f, kind = run(fwd_table, c_int)
    if kind == "band":
        interval = finish(sweep_f.lo, sweep_f.lo_open, sweep_f.hi, sweep_f.hi_open)
        walk = (sa,) + tuple(fwd)
        mt = MarkedTrail(Band.of(walk), walk, 0)
        return mt, interval, interval.length
    if kind == "rho":
        # Eventually-periodic walk whose start is off the cycle: happens only
        # at isolated boundary values (the cycle constraints repeat verbatim,
        # so the interval is already stable and must be a single point).
        interval = finish(sweep_f.lo, sweep_f.lo_open, sweep_f.hi, sweep_f.hi_open)
        if interval.length != 0:
            raise AssertionError("positive-measure non-closing walk in a rational flow")
        return None, interval, Q(0)

    bwd, sweep_b, kind = run(bwd_table, c_int)
    lo, lo_open = max((sweep_f.lo, sweep_f.lo_open), (sweep_b.lo, sweep_b.lo_open))
    hi, hi_open = min((sweep_f.hi, not sweep_f.hi_open), (sweep_b.hi, not sweep_b.hi_open))
    hi_open = not hi_open
    interval = finish(lo, lo_open, hi, hi_open)
    if kind in ("rho", "band"):
        # backward re-entered a cycle (possibly through the start itself, when
        # Back fails to invert a boundary branch): again an isolated value
        if interval.length != 0:
            raise AssertionError("positive-measure non-closing walk in a rational flow")
        return None, interval, Q(0)
    walk = tuple(reversed(bwd)) + (sa,) + tuple(fwd)
    mt = MarkedTrail(Route.of(walk), walk, len(bwd))
    return mt, interval, interval.length


# -- bundle decomposition ---------------------------------------------------------

@dataclass
class BundleCombination:
    coefficients: dict[Trail, Fraction]

    @property
    def routes(self) -> dict[Route, Fraction]:
        return {t: x for t, x in self.coefficients.items() if isinstance(t, Route)}

    @property
    def bands(self) -> dict[Band, Fraction]:
        return {t: x for t, x in self.coefficients.items() if isinstance(t, Band)}

    @property
    def strength(self) -> Fraction:
        return sum(self.routes.values(), Q(0))

    def as_json(self):
        return {
            "routes": [{"trail": str(t), "coeff": format_rational(x)}
                       for t, x in sorted(self.routes.items(), key=lambda kv: trail_key(kv[0]))],
            "bands": [{"trail": str(t), "coeff": format_rational(x)}
                      for t, x in sorted(self.bands.items(), key=lambda kv: trail_key(kv[0]))],
        }


def _arrow_profile(F: Flow, a: str):
    """The tiling of [0, F(a)] by marked-trail intervals at the arrow-flow (a, +1).

    Returns a list of (MarkedTrail, QInterval) sorted along the interval;
    zero-length tiles are included (they carry coefficient 0).
    """
    tiles = []
    uncovered = [QInterval(Q(0), F[a])]
    while uncovered:
        u = uncovered.pop()
        probe = u.lo if u.lo == u.hi else (u.lo + u.hi) / 2
        mt, interval, _ = trace_interval(F, (a, 1), probe)
        if mt is not None:
            tiles.append((mt, interval))
        uncovered.extend(u.minus(interval))
    tiles.sort(key=lambda ti: (ti[1].lo, ti[1].lo_open))
    return tiles


def decompose_bundle(F: Flow) -> BundleCombination:
    """The unique positive bundle combination realizing a rational flow."""
    coeffs: dict[Trail, Fraction] = {}
    for a in sorted(F.quiver.arrows):
        if F[a] == 0:
            continue
        for mt, interval in _arrow_profile(F, a):
            if interval.length == 0:
                continue
            prev = coeffs.get(mt.trail)
            if prev is None:
                coeffs[mt.trail] = interval.length
            elif prev != interval.length:
                raise AssertionError(
                    f"inconsistent coefficient for {mt.trail}: {prev} vs {interval.length}")
    combo = BundleCombination(coeffs)
    _verify_combination(F, combo)
    return combo


def _verify_combination(F: Flow, combo: BundleCombination) -> None:
    total = {a: Q(0) for a in F.quiver.arrows}
    for t, x in combo.coefficients.items():
        for a, _e in t.walk:
            total[a] += x
    if any(total[a] != F[a] for a in total):
        raise AssertionError("bundle combination does not reconstruct the flow")


# -- vortex decomposition ----------------------------------------------------------

@dataclass
class VortexDecomposition:
    routes: dict[Route, Fraction]   # the canonical clique combination K_F^+
    vortex: dict[Band, Fraction]    # the canonical vortex as a band combination

    def as_json(self):
        return {
            "routes": [{"trail": str(t), "coeff": format_rational(x)}
                       for t, x in sorted(self.routes.items(), key=lambda kv: trail_key(kv[0]))],
            "vortex": [{"trail": str(t), "coeff": format_rational(x)}
                       for t, x in sorted(self.vortex.items(), key=lambda kv: trail_key(kv[0]))],
        }


def decompose_vortex(F: Flow) -> VortexDecomposition:
    """Split F into its canonical clique combination plus the canonical vortex.

    For rational flows the bundle and vortex decompositions coincide, so the
    band part of the bundle combination already expresses the canonical vortex.
    """
    combo = decompose_bundle(F)
    return VortexDecomposition(routes=combo.routes, vortex=combo.bands)


# -- blank spaces and splitting strength ---------------------------------------------

@dataclass
class BlankSpace:
    arrow: str
    interval: QInterval
    below: MarkedTrail | None   # None = the sentinel {0}
    above: MarkedTrail | None   # None = the sentinel {F(arrow)}

    @property
    def proper(self) -> bool:
        return self.interval.length > 0

    def as_json(self):
        return {
            "arrow": self.arrow,
            "interval": self.interval.as_json(),
            "below": None if self.below is None else str(self.below.trail),
            "above": None if self.above is None else str(self.above.trail),
            "proper": self.proper,
        }


def _route_tiles(F: Flow, a: str):
    if F[a] == 0:
        return []
    return [(mt, iv) for mt, iv in _arrow_profile(F, a)
            if isinstance(mt.trail, Route) and iv.length > 0]


def blank_spaces(F: Flow) -> list[BlankSpace]:
    """Gaps between consecutive positive route intervals, per arrow at sign +1.

    Sentinels {0} and {F(a)} bound the outermost gaps, so every arrow carries
    one more blank space than it has marked routes in K_F^+.
    """
    blanks = []
    for a in sorted(F.quiver.arrows):
        tiles = _route_tiles(F, a)
        lo_pt = QInterval(Q(0), Q(0))
        hi_pt = QInterval(F[a], F[a])
        bounds = [(None, lo_pt)] + tiles + [(None, hi_pt)]
        for (mt1, i1), (mt2, i2) in zip(bounds, bounds[1:]):
            gap = QInterval(i1.hi, i2.lo, not i1.hi_open, not i2.lo_open)
            blanks.append(BlankSpace(a, gap, mt1, mt2))
    return blanks


def splitting_strength(F: Flow, b: Band) -> Fraction:
    """min |J| / N_{B,J} over the blank spaces J split by some marking of B."""
    from .trails import calculus
    calc = calculus(F.quiver)
    route_part = {mt.trail for a in sorted(F.quiver.arrows) for mt, _ in _route_tiles(F, a)}
    for p in route_part:
        if not calc.compatible(b, p):
            raise DomainError(f"band is incompatible with the route {p} of K_F^+")

    best: Fraction | None = None
    for a in sorted({x for x, _e in b.walk}):
        tiles = _route_tiles(F, a)
        # count, per blank-space index, the markings of B splitting it
        counts = [0] * (len(tiles) + 1)
        for marking in markings_at(b, a, 1):
            below = 0
            for mt, _iv in tiles:
                if countercurrent_compare(F.quiver, mt.viewed_at(a, 1), marking) < 0:
                    below += 1
            counts[below] += 1
        gaps = _gaps_for(F, a, tiles)
        for j, n in enumerate(counts):
            if n > 0:
                ratio = gaps[j].length / n
                if best is None or ratio < best:
                    best = ratio
    if best is None:
        raise DomainError("band uses no arrows")
    return best


def _gaps_for(F: Flow, a: str, tiles):
    lo_pt = QInterval(Q(0), Q(0))
    hi_pt = QInterval(F[a], F[a])
    ivs = [lo_pt] + [iv for _mt, iv in tiles] + [hi_pt]
    return [QInterval(i1.hi, i2.lo, not i1.hi_open, not i2.lo_open)
            for i1, i2 in zip(ivs, ivs[1:])]
