"""Eventually periodic infinite paths, the shift maps, the extended action
g.x, the cocycle g|_x and tail classes of cocycles."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .action import SelfSimilarAction, max_closure
from .group import GroupElement
from .kgraph import (BadDegree, KGraph, Path, deg_add, deg_join, deg_le, deg_scale,
                     deg_sub)


@dataclass(frozen=True, order=True)
class EventuallyPeriodicPath:
    """x = prefix . cycle^inf.  Instances built through :class:`Boundary` are
    canonical, so structural equality is equality of infinite paths."""
    prefix: Path
    cycle: Path

    def __str__(self):
        pre = "" if not self.prefix.word else str(self.prefix)
        return f"{pre};{self.cycle}"


@dataclass(frozen=True)
class TruncatedOrbit:
    prefix: Path  # a correct finite prefix of g.x


@dataclass(frozen=True)
class TailCocycle:
    """The class T_z([g|_base]): p -> g|_{base(0, p - z)} (1 where p - z < 0)."""
    g: GroupElement
    base: EventuallyPeriodicPath
    shift: tuple[int, ...]


class Unknown:
    def __init__(self, reason: str = ""):
        self.reason = reason

    def __bool__(self):
        raise TypeError("Unknown has no truth value")

    def __repr__(self):
        return f"Unknown({self.reason!r})"


def _norm1(d) -> int:
    return sum(d)


class Boundary:
    """Infinite-path operations for one graph (and optionally one action)."""

    def __init__(self, graph: KGraph, action: SelfSimilarAction | None = None):
        self.graph = graph
        self.action = action
        self.ones = (1,) * graph.k
        self._canon_cache: dict = {}

    # construction
    def make(self, prefix: Path | str, cycle: Path | str) -> EventuallyPeriodicPath:
        g = self.graph
        if isinstance(prefix, str):
            prefix = g.path(prefix)
        if isinstance(cycle, str):
            cycle = g.path(cycle)
        if not deg_le(self.ones, g.degree(cycle)):
            raise BadDegree(f"cycle {cycle} must have degree >= {self.ones}")
        if cycle.range != g.source(cycle) or cycle.range != g.source(prefix):
            raise BadDegree(f"{prefix};{cycle} is not a cycle attached to its prefix")
        return self.canonical(EventuallyPeriodicPath(prefix, cycle))

    def parse(self, text: str) -> EventuallyPeriodicPath:
        pre, sep, cyc = text.partition(";")
        if not sep:
            raise BadDegree("infinite path literal needs 'prefix;cycle'")
        cycle = self.graph.path(cyc)
        prefix = self.graph.path(pre) if pre.strip() else Path(cycle.range)
        return self.make(prefix, cycle)

    # raw (non-canonicalising) helpers
    def _unrolled(self, x: EventuallyPeriodicPath, b) -> Path:
        """A finite prefix of x of degree >= b."""
        g = self.graph
        dl, dc = g.degree(x.prefix), g.degree(x.cycle)
        m = 0
        while not deg_le(b, deg_add(dl, deg_scale(m, dc))):
            m += 1
        out = x.prefix
        for _ in range(m):
            out = g.compose(out, x.cycle)
        return out

    def path_segment(self, x: EventuallyPeriodicPath, a, b) -> Path:
        a, b = tuple(a), tuple(b)
        if not deg_le(a, b):
            raise BadDegree(f"{a} is not below {b}")
        return self.graph.segment(self._unrolled(x, b), a, b)

    def _raw_shift(self, x: EventuallyPeriodicPath, p) -> EventuallyPeriodicPath:
        g = self.graph
        p = tuple(p)
        top = deg_join(p, g.degree(x.prefix))
        period = g.degree(x.cycle)
        return EventuallyPeriodicPath(self.path_segment(x, p, top),
                                      self.path_segment(x, top, deg_add(top, period)))

    def same_path(self, x: EventuallyPeriodicPath, y: EventuallyPeriodicPath) -> bool:
        """Semantic equality: align the prefixes, then two pure periodic paths
        c1^inf and c2^inf agree exactly when c1 c2 = c2 c1."""
        g = self.graph
        top = deg_join(g.degree(x.prefix), g.degree(y.prefix))
        if self.path_segment(x, g.zero(), top) != self.path_segment(y, g.zero(), top):
            return False
        c1 = self.path_segment(x, top, deg_add(top, g.degree(x.cycle)))
        c2 = self.path_segment(y, top, deg_add(top, g.degree(y.cycle)))
        if c1.range != c2.range:
            return False
        return g.compose(c1, c2) == g.compose(c2, c1)

    def _is_pure_with_period(self, y: EventuallyPeriodicPath, period) -> bool:
        c = self.path_segment(y, self.graph.zero(), period)
        if c.range != self.graph.source(c):
            return False
        return self.same_path(y, EventuallyPeriodicPath(Path(c.range), c))

    def canonical(self, x: EventuallyPeriodicPath) -> EventuallyPeriodicPath:
        """Least period (by total length, then lexicographic), then least
        prefix degree making the remainder purely periodic with that period."""
        hit = self._canon_cache.get(x)
        if hit is not None:
            return hit
        g = self.graph
        p0 = g.degree(x.cycle)
        tail = EventuallyPeriodicPath(Path(x.cycle.range), x.cycle)
        span = range(1, _norm1(p0) + 1)
        periods = sorted((P for P in product(*(span for _ in range(g.k)))
                          if _norm1(P) <= _norm1(p0)), key=lambda P: (_norm1(P), P))
        best = p0
        for P in periods:
            if self._is_pure_with_period(tail, P):
                best = P
                break
        dl = g.degree(x.prefix)
        cands = sorted((n for n in product(*(range(_norm1(dl) + 1) for _ in range(g.k)))
                        if _norm1(n) <= _norm1(dl)), key=lambda n: (_norm1(n), n))
        out = None
        for n in cands:
            if self._is_pure_with_period(self._raw_shift(x, n), best):
                out = EventuallyPeriodicPath(self.path_segment(x, g.zero(), n),
                                             self.path_segment(x, n, deg_add(n, best)))
                break
        self._canon_cache[x] = out
        return out

    # public operations
    def shift(self, x: EventuallyPeriodicPath, p) -> EventuallyPeriodicPath:
        return self.canonical(self._raw_shift(x, p))

    def cocycle(self, g: GroupElement, x: EventuallyPeriodicPath, p) -> GroupElement:
        return self.action.restrict(g, self.path_segment(x, self.graph.zero(), p))

    def act_on_path(self, g: GroupElement, x: EventuallyPeriodicPath, cap: int | None = None):
        act = self.action
        cap = max_closure() if cap is None else cap
        head, h = act.act_restrict(g, x.prefix)
        seen = {h: 0}
        images = []
        while True:
            img, h = act.act_restrict(h, x.cycle)
            images.append(img)
            if h in seen:
                i = seen[h]
                pre = head
                for c in images[:i]:
                    pre = self.graph.compose(pre, c)
                cyc = images[i]
                for c in images[i + 1:]:
                    cyc = self.graph.compose(cyc, c)
                return self.canonical(EventuallyPeriodicPath(pre, cyc))
            seen[h] = len(images)
            if len(seen) > cap:
                pre = head
                for c in images:
                    pre = self.graph.compose(pre, c)
                return TruncatedOrbit(pre)

    def vertex_at(self, x: EventuallyPeriodicPath, p) -> str:
        return self.graph.source(self.path_segment(x, self.graph.zero(), p))

    def tail_cocycle_eq(self, c1: TailCocycle, c2: TailCocycle, unroll: int = 8):
        """True/False when decided, otherwise :class:`Unknown`.

        If the bases agree on a common tail after aligned shifts, both classes
        become [h1|_w] and [h2|_w] over one pure periodic w = c^inf.  Restricting
        along the same path preserves equality, so the classes agree iff
        h1|_{c^m} = h2|_{c^m} for some m; the pair sequence is eventually
        periodic, which makes the search exact when it closes up."""
        g = self.graph
        act = self.action
        x1, x2 = c1.base, c2.base
        z1, z2 = c1.shift, c2.shift
        t0 = deg_join(tuple(a + b for a, b in zip(z1, g.degree(x1.prefix))),
                      tuple(a + b for a, b in zip(z2, g.degree(x2.prefix))))
        t0 = deg_join(t0, deg_join(z1, z2))
        t0 = tuple(max(0, t) for t in t0)
        step = deg_add(g.degree(x1.cycle), g.degree(x2.cycle))
        for m in range(unroll + 1):
            t = deg_add(t0, deg_scale(m, step))
            a1 = tuple(a - b for a, b in zip(t, z1))
            a2 = tuple(a - b for a, b in zip(t, z2))
            w1, w2 = self.shift(x1, a1), self.shift(x2, a2)
            if w1 != w2:
                continue
            h1 = self.cocycle(c1.g, x1, a1)
            h2 = self.cocycle(c2.g, x2, a2)
            return self._same_base_eq(h1, h2, w1)
        k1 = self._eventual_constant(c1)
        k2 = self._eventual_constant(c2)
        if k1 is not None and k2 is not None:
            return k1 == k2
        return Unknown("bases not aligned within the unrolling bound")

    def _same_base_eq(self, h1, h2, w: EventuallyPeriodicPath, cap: int | None = None):
        cap = max_closure() if cap is None else cap
        # w is purely periodic here (its prefix is a vertex)
        h1, h2 = self.action.restrict(h1, w.prefix), self.action.restrict(h2, w.prefix)
        seen = set()
        while (h1, h2) not in seen:
            if h1 == h2:
                return True
            if len(seen) > cap:
                return Unknown("restriction orbit exceeded the cap")
            seen.add((h1, h2))
            h1 = self.action.restrict(h1, w.cycle)
            h2 = self.action.restrict(h2, w.cycle)
        return False

    def _eventual_constant(self, c: TailCocycle):
        """A value the cocycle class is eventually constant at, if restriction
        by every edge reachable from the periodic part fixes it."""
        g = self.graph
        x = c.base
        h = self.action.restrict(c.g, x.prefix)
        verts = {x.cycle.range}
        stack = [x.cycle.range]
        while stack:
            u = stack.pop()
            for e in g.edges.values():
                if e.range == u and e.source not in verts:
                    verts.add(e.source)
                    stack.append(e.source)
        for e in g.edges.values():
            if e.range in verts and self.action.act_edge(h, e.id)[1] != h:
                return None
        return h

    def cycles_from(self, v: str, max_mult: int = 2) -> list[EventuallyPeriodicPath]:
        """Pure periodic paths c^inf at v with d(c) = m(1,...,1), m <= max_mult."""
        out = []
        for m in range(1, max_mult + 1):
            for c in self.graph.paths_from(v, deg_scale(m, self.ones)):
                if self.graph.source(c) == v:
                    out.append(self.canonical(EventuallyPeriodicPath(Path(v), c)))
        return sorted(set(out))

    def sample_paths(self, max_mult: int = 2, prefix_degrees=None) -> list[EventuallyPeriodicPath]:
        """Eventually periodic paths with a cycle of degree m(1,...,1), m <= max_mult,
        behind every prefix of the given degrees (default: 0 and each e_i)."""
        g = self.graph
        if prefix_degrees is None:
            prefix_degrees = [g.zero()] + [tuple(1 if j == i else 0 for j in range(g.k))
                                           for i in range(g.k)]
        out = set()
        for v in g.vertices:
            for n in prefix_degrees:
                for pre in g.paths_from(v, n):
                    for cyc in self.cycles_from(g.source(pre), max_mult):
                        out.add(self.canonical(EventuallyPeriodicPath(pre, cyc.cycle)))
        return sorted(out)

