"""Compact open bisections Z(mu, g, nu) of the path groupoid, a concrete arrow
model used as a membership oracle, and type-semigroup witness searches."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .action import PseudoFreeWitness, SelfSimilarAction
from .boundary import Boundary, EventuallyPeriodicPath, TailCocycle, Unknown
from .errors import SSKGError, ValidationError
from .group import GroupElement
from .kgraph import Path, deg_add, deg_join, deg_le, deg_sub


class NotPseudoFree(SSKGError):
    pass


class InvalidBisection(ValidationError):
    pass


class ZeroMultiplicity(SSKGError):
    pass


@dataclass(frozen=True, order=True)
class BasicBisection:
    mu: Path
    g: GroupElement
    nu: Path

    def __str__(self):
        return f"Z({self.mu}, {self.g}, {self.nu})"


@dataclass(frozen=True)
class BisectionSet:
    members: tuple[BasicBisection, ...]

    @staticmethod
    def of(items) -> "BisectionSet":
        return BisectionSet(tuple(sorted(set(items))))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        if not self.members:
            return "{}"
        return "{" + ", ".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class Arrow:
    """(x; p, q, h; y) with sigma^p(x) = h . sigma^q(y); its lag class is
    T_p([h|_{sigma^q y}]) and its degree p - q."""
    x: EventuallyPeriodicPath
    y: EventuallyPeriodicPath
    p: tuple[int, ...]
    q: tuple[int, ...]
    h: GroupElement


@dataclass(frozen=True)
class TypeElement:
    counts: tuple[tuple[str, int], ...]

    @staticmethod
    def of(mapping) -> "TypeElement":
        return TypeElement(tuple(sorted((v, n) for v, n in dict(mapping).items() if n)))

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)

    def dominates(self, other: "TypeElement") -> bool:
        mine = self.as_dict()
        return all(mine.get(v, 0) >= n for v, n in other.counts)

    def __add__(self, other):
        d = self.as_dict()
        for v, n in other.counts:
            d[v] = d.get(v, 0) + n
        return TypeElement.of(d)

    def __str__(self):
        if not self.counts:
            return "0"
        return " + ".join(f"[{v}]" if n == 1 else f"{n}[{v}]" for v, n in self.counts)


@dataclass(frozen=True)
class Move:
    kind: str  # "subdivide" (param: colour) or "transport" (param: generator letter)
    vertex: str
    param: object

    def __str__(self):
        return f"{self.kind}({self.vertex}, {self.param})"


@dataclass(frozen=True)
class Chain:
    """start -> ... -> end by moves; certifies target <= start when end
    dominates target."""
    start: TypeElement
    target: TypeElement
    moves: tuple[Move, ...]
    states: tuple[TypeElement, ...]

    def __str__(self):
        steps = " -> ".join(str(s) for s in self.states)
        return f"{self.target} <= {self.start} via {steps}"


@dataclass(frozen=True)
class NotFound:
    depth: int
    detail: str = ""


class Groupoid:
    def __init__(self, action: SelfSimilarAction):
        self.action = action
        self.graph = action.graph
        self.group = action.group
        self.boundary = Boundary(self.graph, action)

    # bisections
    def basic(self, mu, g, nu) -> BasicBisection:
        gr = self.graph
        mu = gr.path(mu) if isinstance(mu, str) else mu
        nu = gr.path(nu) if isinstance(nu, str) else nu
        g = self.group.parse(g)
        if gr.source(mu) != self.action.act_vertex(g, gr.source(nu)):
            raise InvalidBisection(f"Z({mu}, {g}, {nu}): s(mu) != g.s(nu)")
        return BasicBisection(mu, g, nu)

    def shift_degree(self, b: BasicBisection) -> tuple[int, ...]:
        gr = self.graph
        return tuple(a - c for a, c in zip(gr.degree(b.mu), gr.degree(b.nu)))

    def inverse(self, b: BasicBisection) -> BasicBisection:
        return BasicBisection(b.nu, b.g.inverse(), b.mu)

    def inverse_set(self, s: BisectionSet) -> BisectionSet:
        return BisectionSet.of(self.inverse(b) for b in s)

    def compose(self, b1: BasicBisection, b2: BasicBisection) -> BisectionSet:
        gr, act = self.graph, self.action
        g, h = b1.g, b2.g
        hinv = h.inverse()
        out = []
        for rho, tau in gr.lambda_min(b1.nu, b2.mu):
            grho, g_rho = act.act_restrict(g, rho)
            htau, hinv_tau = act.act_restrict(hinv, tau)
            # h|_{h^-1 . tau} = (h^-1|_tau)^-1
            out.append(BasicBisection(gr.compose(b1.mu, grho), g_rho * hinv_tau.inverse(),
                                      gr.compose(b2.nu, htau)))
        return BisectionSet.of(out)

    def compose_sets(self, s1: BisectionSet, s2: BisectionSet) -> BisectionSet:
        out = []
        for b1 in s1:
            for b2 in s2:
                out += self.compose(b1, b2).members
        return BisectionSet.of(out)

    def _require_pseudo_free(self):
        if isinstance(self.action.pseudo_free_verdict(), PseudoFreeWitness):
            raise NotPseudoFree(f"action is not pseudo free: {self.action.pseudo_free_verdict()}")

    def intersect(self, b1: BasicBisection, b2: BasicBisection) -> BisectionSet:
        self._require_pseudo_free()
        gr, act = self.graph, self.action
        if self.shift_degree(b1) != self.shift_degree(b2):
            return BisectionSet(())
        out = []
        for alpha, alpha2 in gr.lambda_min(b1.nu, b2.nu):
            ga, g_a = act.act_restrict(b1.g, alpha)
            ga2, g_a2 = act.act_restrict(b2.g, alpha2)
            if g_a != g_a2:
                continue
            left = gr.compose(b1.mu, ga)
            if left != gr.compose(b2.mu, ga2):
                continue
            out.append(BasicBisection(left, g_a, gr.compose(b1.nu, alpha)))
        return BisectionSet.of(out)

    def intersect_sets(self, s1: BisectionSet, s2: BisectionSet) -> BisectionSet:
        out = []
        for b1 in s1:
            for b2 in s2:
                out += self.intersect(b1, b2).members
        return BisectionSet.of(out)

    def expand(self, b: BasicBisection, level) -> list[BasicBisection]:
        """Rewrite Z(mu, g, nu) as the disjoint union over rho in s(nu)Lambda^{level - d(nu)}."""
        gr, act = self.graph, self.action
        out = []
        for rho in gr.paths_from(gr.source(b.nu), deg_sub(tuple(level), gr.degree(b.nu))):
            grho, g_rho = act.act_restrict(b.g, rho)
            out.append(BasicBisection(gr.compose(b.mu, grho), g_rho, gr.compose(b.nu, rho)))
        return out

    def _expanded(self, s: BisectionSet, levels: dict) -> frozenset:
        out = set()
        for b in s:
            out.update(self.expand(b, levels[self.shift_degree(b)]))
        return frozenset(out)

    def _levels(self, *sets) -> dict:
        levels: dict = {}
        for s in sets:
            for b in s:
                n = self.shift_degree(b)
                d = self.graph.degree(b.nu)
                levels[n] = deg_join(levels.get(n, d), d)
        return levels

    def canonical(self, s: BisectionSet) -> BisectionSet:
        return BisectionSet.of(self._expanded(s, self._levels(s)))

    def sets_equal(self, s1: BisectionSet, s2: BisectionSet) -> bool:
        levels = self._levels(s1, s2)
        return self._expanded(s1, levels) == self._expanded(s2, levels)

    # arrow model
    def arrow_at(self, b: BasicBisection, y: EventuallyPeriodicPath) -> Arrow | None:
        """The arrow of Z(mu, g, nu) whose source is y, if y lies in Z(nu)."""
        B, gr = self.boundary, self.graph
        dnu = gr.degree(b.nu)
        if B.path_segment(y, gr.zero(), dnu) != b.nu:
            return None
        tail = B.shift(y, dnu)
        moved = B.act_on_path(b.g, tail)
        if not isinstance(moved, EventuallyPeriodicPath):
            raise SSKGError("action orbit truncated while building an arrow")
        x = B.canonical(EventuallyPeriodicPath(gr.compose(b.mu, moved.prefix), moved.cycle))
        return Arrow(x, y, gr.degree(b.mu), dnu, b.g)

    def arrow_inverse(self, a: Arrow) -> Arrow:
        return Arrow(a.y, a.x, a.q, a.p, a.h.inverse())

    def arrow_mul(self, a: Arrow, b: Arrow) -> Arrow:
        if a.y != b.x:
            raise SSKGError("arrows are not composable")
        B = self.boundary
        top = deg_join(a.q, b.p)
        h1 = B.cocycle(a.h, B.shift(a.y, a.q), deg_sub(top, a.q))
        h2 = B.cocycle(b.h, B.shift(b.y, b.q), deg_sub(top, b.p))
        return Arrow(a.x, b.y, deg_add(a.p, deg_sub(top, a.q)), deg_add(b.q, deg_sub(top, b.p)), h1 * h2)

    def arrow_eq(self, a: Arrow, b: Arrow) -> bool:
        if a.x != b.x or a.y != b.y:
            return False
        if tuple(i - j for i, j in zip(a.p, a.q)) != tuple(i - j for i, j in zip(b.p, b.q)):
            return False
        B = self.boundary
        res = B.tail_cocycle_eq(TailCocycle(a.h, B.shift(a.y, a.q), a.p),
                                TailCocycle(b.h, B.shift(b.y, b.q), b.p))
        if isinstance(res, Unknown):
            raise SSKGError(f"arrow comparison undecided: {res}")
        return res

    def contains(self, s, a: Arrow) -> bool:
        members = [s] if isinstance(s, BasicBisection) else list(s)
        for b in members:
            cand = self.arrow_at(b, a.y)
            if cand is not None and self.arrow_eq(cand, a):
                return True
        return False

    def in_product(self, s1, s2, a: Arrow) -> bool:
        """Pointwise product membership: a = a1 a2 with a2 in s2 at source s(a)
        and a1 in s1 at source r(a2)."""
        s1 = [s1] if isinstance(s1, BasicBisection) else list(s1)
        s2 = [s2] if isinstance(s2, BasicBisection) else list(s2)
        for b2 in s2:
            a2 = self.arrow_at(b2, a.y)
            if a2 is None:
                continue
            for b1 in s1:
                a1 = self.arrow_at(b1, a2.x)
                if a1 is not None and self.arrow_eq(self.arrow_mul(a1, a2), a):
                    return True
        return False

    # type semigroup
    def vertex_type(self, v: str, n: int = 1) -> TypeElement:
        return TypeElement.of({v: n})

    def type_subdivide(self, t: TypeElement, v: str, i: int) -> TypeElement:
        d = t.as_dict()
        if d.get(v, 0) < 1:
            raise ZeroMultiplicity(f"{t} has no unit at {v}")
        d[v] -= 1
        for e in self.graph.edges_into(v, i):
            s = self.graph.edges[e].source
            d[s] = d.get(s, 0) + 1
        return TypeElement.of(d)

    def type_transport(self, t: TypeElement, v: str, letter) -> TypeElement:
        d = t.as_dict()
        if d.get(v, 0) < 1:
            raise ZeroMultiplicity(f"{t} has no unit at {v}")
        d[v] -= 1
        w = self.action._letter_vertex(letter, v)
        d[w] = d.get(w, 0) + 1
        return TypeElement.of(d)

    def _moves(self, t: TypeElement):
        letters = [(s, sign) for s in sorted(self.action.generators, key=self.group.sort_key)
                   for sign in (1, -1)]
        for v, _ in t.counts:
            for i in range(1, self.graph.k + 1):
                yield Move("subdivide", v, i), self.type_subdivide(t, v, i)
            for letter in letters:
                nxt = self.type_transport(t, v, letter)
                if nxt != t:
                    g = self.group.wrap(letter[0])
                    yield Move("transport", v, g if letter[1] > 0 else g.inverse()), nxt

    def type_order_witness(self, t1: TypeElement, t2: TypeElement, depth: int = 5,
                           max_units: int | None = None):
        """Breadth-first search for moves taking t2 to something dominating t1."""
        if max_units is None:
            max_units = 2 * sum(n for _, n in t1.counts) + sum(n for _, n in t2.counts) + 2
        parent = {t2: None}
        frontier = [t2]
        for level in range(depth + 1):
            for t in frontier:
                if t.dominates(t1):
                    moves, states = [], [t]
                    while parent[states[-1]] is not None:
                        prev, mv = parent[states[-1]]
                        moves.append(mv)
                        states.append(prev)
                    return Chain(t2, t1, tuple(reversed(moves)), tuple(reversed(states)))
            if level == depth:
                break
            nxt = []
            for t in frontier:
                for mv, u in self._moves(t):
                    if u not in parent and sum(n for _, n in u.counts) <= max_units:
                        parent[u] = (t, mv)
                        nxt.append(u)
            frontier = nxt
        return NotFound(depth)

    def replay(self, chain: Chain) -> bool:
        t = chain.start
        for mv, expected in zip(chain.moves, chain.states[1:]):
            if mv.kind == "subdivide":
                t = self.type_subdivide(t, mv.vertex, mv.param)
            elif mv.kind == "transport":
                g = mv.param
                letter = (g.value, 1) if g.value in self.action.generators else (g.inverse().value, -1)
                t = self.type_transport(t, mv.vertex, letter)
            else:
                return False
            if t != expected:
                return False
        return len(chain.moves) + 1 == len(chain.states) and t.dominates(chain.target)

    def purely_infinite_witness(self, depth: int = 5):
        """Chains certifying 2[v] <= [v] for every vertex, or NotFound."""
        chains = {}
        for v in self.graph.vertices:
            res = self.type_order_witness(self.vertex_type(v, 2), self.vertex_type(v), depth)
            if isinstance(res, NotFound):
                return NotFound(depth, f"no chain for 2[{v}] <= [{v}]")
            chains[v] = res
        return chains
