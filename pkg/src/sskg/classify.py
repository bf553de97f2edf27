"""Structural decisions and the classification pipeline: G-cofinality,
periodicity witnesses, graph traces, the cone condition and the report."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd, lcm

from .action import Decided, NoWitness as PFNoWitness, PseudoFreeWitness, SelfSimilarAction
from .boundary import Boundary, EventuallyPeriodicPath
from .errors import InternalInconsistency
from .group import GroupElement
from .kgraph import Path, deg_join, deg_scale, deg_sub, degrees_upto, unit
from .lp import feasible_point


@dataclass(frozen=True)
class CofinalityResult:
    value: bool
    failing_pair: tuple[str, str] | None = None  # (v, w): wLambda^p never lands inside reach(G.v)


@dataclass(frozen=True)
class PeriodicityWitness:
    """Every infinite path at ``vertex`` satisfies sigma^p(y) = g . sigma^q(y);
    ``x`` is one of them."""
    x: EventuallyPeriodicPath
    g: GroupElement
    p: tuple[int, ...]
    q: tuple[int, ...]
    vertex: str

    def __str__(self):
        return f"Witness({self.x}, {self.g}, {_fmt_deg(self.p)}, {_fmt_deg(self.q)})"


@dataclass(frozen=True)
class NoPeriodicityWitness:
    cycle_len: int
    ball: int
    degree: tuple[int, ...]

    def __str__(self):
        return f"NoWitness(cycle_len={self.cycle_len}, ball={self.ball}, degree={_fmt_deg(self.degree)})"


@dataclass(frozen=True)
class GraphTraces:
    existence: bool
    witness: dict[str, Fraction] | None
    faithful_exists: bool


@dataclass(frozen=True)
class ConeResult:
    holds: bool
    failing_set: tuple[int, ...] | None = None
    vector: dict[str, Fraction] | None = None  # nonzero nonnegative vector in the span


@dataclass
class ClassificationReport:
    pseudo_free: object
    g_cofinal: bool
    aperiodicity: str
    strongly_connected: bool
    trace_exists: bool
    cone_condition_holds: bool
    simplicity: str
    dichotomy: str
    kirchberg: bool
    metadata: dict = field(default_factory=dict)

    def fields(self) -> list[tuple[str, object]]:
        return [("pseudo_free", self.pseudo_free), ("g_cofinal", self.g_cofinal),
                ("aperiodicity", self.aperiodicity), ("strongly_connected", self.strongly_connected),
                ("trace_exists", self.trace_exists), ("cone_condition_holds", self.cone_condition_holds),
                ("simplicity", self.simplicity), ("dichotomy", self.dichotomy),
                ("kirchberg", self.kirchberg), ("metadata", self.metadata)]


def _fmt_deg(d) -> str:
    return str(d[0]) if len(d) == 1 else "(" + ",".join(map(str, d)) + ")"


def fmt_pf(verdict) -> str:
    if isinstance(verdict, PseudoFreeWitness):
        return f"Witness({verdict.g}, {verdict.edge})"
    if isinstance(verdict, PFNoWitness):
        return f"NoWitness(ball={verdict.radius})"
    if isinstance(verdict, Decided):
        return f"Decided({str(verdict.value).lower()})"
    return str(verdict)


class Classifier:
    def __init__(self, action: SelfSimilarAction):
        self.action = action
        self.graph = action.graph
        self.group = action.group
        self.boundary = Boundary(self.graph, action)
        self.V = list(self.graph.vertices)

    # matrices
    def vertex_matrix(self, i: int) -> list[list[int]]:
        """T_{e_i}[v][w] = |v Lambda^{e_i} w|, rows and columns in vertex order."""
        return self.vertex_matrix_degree(unit(self.graph.k, i))

    def vertex_matrix_degree(self, p) -> list[list[int]]:
        idx = {v: j for j, v in enumerate(self.V)}
        T = [[0] * len(self.V) for _ in self.V]
        for v in self.V:
            for mu in self.graph.paths_from(v, tuple(p)):
                T[idx[v]][idx[self.graph.source(mu)]] += 1
        return T

    # reachability
    def orbit(self, v: str) -> set[str]:
        return self.action.orbit(v)

    def _step(self, S: frozenset, i: int) -> frozenset:
        return frozenset(self.graph.edges[e].source for v in S for e in self.graph.edges_into(v, i))

    def reach(self, S) -> set[str]:
        """Sources of all paths whose range lies in S."""
        seen = set(S)
        stack = list(S)
        while stack:
            u = stack.pop()
            for e in self.graph.edges.values():
                if e.range == u and e.source not in seen:
                    seen.add(e.source)
                    stack.append(e.source)
        return seen

    def cofinality(self) -> CofinalityResult:
        k = self.graph.k
        for v in self.V:
            R = self.reach(self.orbit(v))
            for w in self.V:
                start = frozenset([w])
                seen = {start}
                stack = [start]
                ok = False
                while stack:
                    S = stack.pop()
                    if S <= R:
                        ok = True
                        break
                    for i in range(1, k + 1):
                        T = self._step(S, i)
                        if T not in seen:
                            seen.add(T)
                            stack.append(T)
                if not ok:
                    return CofinalityResult(False, (v, w))
        return CofinalityResult(True)

    def is_G_cofinal(self) -> bool:
        return self.cofinality().value

    def is_G_strongly_connected(self) -> bool:
        return all(w in self.reach(self.orbit(v)) for v in self.V for w in self.V)

    def is_G_hereditary(self, H) -> bool:
        H = set(H)
        if not self.reach(H) <= H:
            return False
        return all(self.orbit(v) <= H for v in H)

    # periodicity
    def uniform_period(self, v: str, g: GroupElement, p, q, cap: int = 20000):
        """Decide whether sigma^p(x) = g . sigma^q(x) for every x in v Lambda^inf.

        Returns True/False, or None if the state exploration exceeds ``cap``.
        A state (alpha, beta, h) asserts alpha y = beta (h . y) for every
        infinite y at s(alpha); d(alpha) and d(beta) have disjoint supports."""
        gr, act = self.graph, self.action
        p, q = tuple(p), tuple(q)
        if p == q:
            if g.is_identity():
                return False
            ones = (1,) * gr.k
            states = {(gr.source(lam), g) for lam in gr.paths_from(v, p)}
            stack = list(states)
            while stack:
                w, h = stack.pop()
                if act.act_vertex(h, w) != w:
                    return False
                for mu in gr.paths_from(w, ones):
                    img, r = act.act_restrict(h, mu)
                    if img != mu:
                        return False
                    nxt = (gr.source(mu), r)
                    if nxt not in states:
                        states.add(nxt)
                        if len(states) > cap:
                            return None
                        stack.append(nxt)
            return True
        top = deg_join(p, q)
        states = set()
        for lam in gr.paths_from(v, top):
            alpha = gr.segment(lam, p, top)
            tail_q = gr.segment(lam, q, top)
            beta, h = act.act_restrict(g, tail_q)
            if alpha.range != beta.range:
                return False
            states.add((alpha, beta, h))
        stack = list(states)
        while stack:
            alpha, beta, h = stack.pop()
            a, b = gr.degree(alpha), gr.degree(beta)
            w = gr.source(alpha)
            if act.act_vertex(h, w) != gr.source(beta):
                return False
            ab = tuple(x + y for x, y in zip(a, b))
            for mu in gr.paths_from(w, ab):
                mu_b = gr.segment(mu, gr.zero(), b)
                mu_a, rest_a = gr.factorize(mu, a)
                left = gr.compose(alpha, mu_b)
                h_mu_a, h_a = act.act_restrict(h, mu_a)
                if left != gr.compose(beta, h_mu_a):
                    return False
                alpha2 = gr.segment(mu, b, ab)
                beta2, _ = act.act_restrict(h_a, rest_a)
                nxt = (alpha2, beta2, act.restrict(h, mu))
                if nxt not in states:
                    states.add(nxt)
                    if len(states) > cap:
                        return None
                    stack.append(nxt)
        return True

    def _representative(self, v: str, cycle_len: int) -> EventuallyPeriodicPath | None:
        B = self.boundary
        ones = (1,) * self.graph.k
        for m in range(len(self.V) + 1):
            for pre in self.graph.paths_from(v, deg_scale(m, ones)):
                cyc = B.cycles_from(self.graph.source(pre), cycle_len)
                if cyc:
                    return B.canonical(EventuallyPeriodicPath(pre, cyc[0].cycle))
        return None

    def periodicity_witness(self, cycle_len_bound: int = 2, ball_radius: int = 4, degree_bound=None):
        gr = self.graph
        if degree_bound is None:
            degree_bound = (2,) * gr.k
        degree_bound = tuple(degree_bound)
        degs = degrees_upto(degree_bound)
        pairs = sorted(((p, q) for p in degs for q in degs),
                       key=lambda pq: (sum(pq[0]) + sum(pq[1]), pq[1], pq[0]))
        ball = sorted(self.group.enumerate_ball(ball_radius))
        for p, q in pairs:
            for g in ball:
                if p == q and g.is_identity():
                    continue
                for v in self.V:
                    if self.uniform_period(v, g, p, q) is True:
                        x = self._representative(v, cycle_len_bound)
                        if x is None:
                            x = self._representative(v, len(self.V) * 2)
                        return PeriodicityWitness(x, g, p, q, v)
        return NoPeriodicityWitness(cycle_len_bound, ball_radius, degree_bound)

    # traces and the cone condition
    def _trace_rows(self):
        n = len(self.V)
        rows = []
        for i in range(1, self.graph.k + 1):
            T = self.vertex_matrix(i)
            for r in range(n):
                rows.append([T[r][c] - (1 if r == c else 0) for c in range(n)])
        return rows

    def graph_traces(self) -> GraphTraces:
        n = len(self.V)
        rows = self._trace_rows()
        base = feasible_point(rows + [[1] * n], [0] * len(rows) + [1])
        if base is None:
            return GraphTraces(False, None, False)
        total = [Fraction(0)] * n
        faithful = True
        for j in range(n):
            probe = feasible_point(rows + [[int(c == j) for c in range(n)]], [0] * len(rows) + [1])
            if probe is None:
                faithful = False
            else:
                total = [a + b for a, b in zip(total, probe)]
        vec = total if faithful else base
        return GraphTraces(True, dict(zip(self.V, _primitive(vec))), faithful)

    def cone_condition(self) -> ConeResult:
        """For each nonempty F in {1..k} (smallest first) look for a nonzero
        nonnegative vector in the rational span of the columns of I - T_{e_i}^t."""
        n = len(self.V)
        k = self.graph.k
        mats = {}
        for i in range(1, k + 1):
            T = self.vertex_matrix(i)
            # column c of I - T^t has entries (I - T^t)[r][c] = delta_rc - T[c][r]
            mats[i] = [[(1 if r == c else 0) - T[c][r] for c in range(n)] for r in range(n)]
        for size in range(1, k + 1):
            for F in combinations(range(1, k + 1), size):
                w = self.span_meets_orthant([mats[i] for i in F])
                if w is not None:
                    return ConeResult(False, F, dict(zip(self.V, w)))
        return ConeResult(True)

    @staticmethod
    def span_meets_orthant(blocks) -> list[Fraction] | None:
        """Nonzero w >= 0 in the column span of the given n x n blocks, or None.
        Variables: c+ and c- (the free coefficients) and w, with M c+ - M c- - w = 0
        and sum(w) = 1."""
        n = len(blocks[0])
        cols = [[M[r][c] for r in range(n)] for M in blocks for c in range(n)]
        m = len(cols)
        A = []
        for r in range(n):
            A.append([col[r] for col in cols] + [-col[r] for col in cols]
                     + [-(1 if r == j else 0) for j in range(n)])
        A.append([0] * (2 * m) + [1] * n)
        sol = feasible_point(A, [0] * n + [1])
        if sol is None:
            return None
        return _primitive(sol[2 * m:])

    def stably_finite_test(self) -> bool:
        return self.cone_condition().holds

    # pipeline
    def classify(self, ball: int = 6, cycle_len: int = 2, degree=None, periodic_ball: int = 4,
                 depth: int = 5, amenable: bool = True) -> ClassificationReport:
        from .groupoid import Groupoid, NotFound

        pf = self.action.pseudo_free_check(ball)
        cof = self.cofinality()
        per = self.periodicity_witness(cycle_len, periodic_ball, degree)
        sc = self.is_G_strongly_connected()
        tr = self.graph_traces()
        cone = self.cone_condition()
        if tr.faithful_exists != cone.holds:
            raise InternalInconsistency(
                f"faithful trace existence {tr.faithful_exists} but cone condition {cone.holds}")
        if cof.value and tr.existence != tr.faithful_exists:
            raise InternalInconsistency("cofinal graph with a nonzero trace that is not faithful")

        if not cof.value:
            v, w = cof.failing_pair
            simplicity = f"NotSimple(not G-cofinal: pair ({v}, {w}))"
        elif isinstance(per, PeriodicityWitness):
            simplicity = f"NotSimple(periodicity {per})"
        else:
            simplicity = "SimpleModuloAperiodicity"
        pf_refuted = isinstance(pf, PseudoFreeWitness)
        if simplicity.startswith("NotSimple") or pf_refuted:
            dichotomy = "NotApplicable"
        else:
            dichotomy = "StablyFinite" if tr.existence else "PurelyInfinite"
        kirchberg = dichotomy == "PurelyInfinite" and amenable

        chains = Groupoid(self.action).purely_infinite_witness(depth)
        meta = {
            "amenable_flag": amenable,
            "nuclear_uct_note": ("G declared amenable: the algebra is nuclear and satisfies the UCT"
                                 if amenable else
                                 "G not declared amenable: nuclearity and the UCT are not concluded"),
            "aperiodicity_caveat": ("G-aperiodicity is semi-decided; SimpleModuloAperiodicity means "
                                    "no periodicity witness exists within the stated bounds"),
            "trace_witness": ({v: str(x) for v, x in tr.witness.items()} if tr.witness else None),
            "faithful_trace_exists": tr.faithful_exists,
            "cone_failing_set": list(cone.failing_set) if cone.failing_set else None,
            "cofinal_failing_pair": list(cof.failing_pair) if cof.failing_pair else None,
            "type_semigroup_purely_infinite": (str(chains) if isinstance(chains, NotFound)
                                               else "chains found for every vertex"),
            "bounds": {"ball": ball, "cycle_len": cycle_len, "periodic_ball": periodic_ball,
                       "degree": list(per.degree) if isinstance(per, NoPeriodicityWitness)
                       else list(degree or (2,) * self.graph.k), "depth": depth},
        }
        if pf_refuted:
            meta["pseudo_free_caveat"] = "action is not pseudo free; the structure theorems do not apply"
        return ClassificationReport(
            pseudo_free=fmt_pf(pf),
            g_cofinal=cof.value,
            aperiodicity=(f"Refuted({per})" if isinstance(per, PeriodicityWitness) else str(per)),
            strongly_connected=sc,
            trace_exists=tr.existence,
            cone_condition_holds=cone.holds,
            simplicity=simplicity,
            dichotomy=dichotomy,
            kirchberg=kirchberg,
            metadata=meta,
        )


def _primitive(vec) -> list[Fraction]:
    """Scale a nonnegative rational vector to the primitive integer vector."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    return [Fraction(x // g) for x in ints]
