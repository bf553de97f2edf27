"""Self-similar group actions on a k-graph.

Generators are specified on vertices and edges (image plus restriction).  The
action and restriction of an arbitrary group element on an arbitrary path are
computed edge by edge, decomposing the element into generator letters and
applying ``(gh)|_e = g|_{h.e} h|_e``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

from .errors import SSKGError, ValidationError
from .group import FiniteGroup, Group, GroupElement
from .kgraph import KGraph, Path


def max_closure() -> int:
    return int(os.environ.get("SSKG_MAX_CLOSURE", "4096"))


class MixedStructures(SSKGError):
    pass


class HypothesisViolation(ValidationError):
    clause = "?"

    def __init__(self, message: str, datum=None):
        super().__init__(f"hypothesis ({self.clause}) violated: {message}")
        self.datum = datum


class HypothesisIViolation(HypothesisViolation):
    clause = "i"


class HypothesisIIViolation(HypothesisViolation):
    clause = "ii"


class HypothesisIIIViolation(HypothesisViolation):
    clause = "iii"


class HypothesisIVViolation(HypothesisViolation):
    clause = "iv"


class HypothesisVViolation(HypothesisViolation):
    clause = "v"


class HypothesisVIViolation(HypothesisViolation):
    clause = "vi"


class HypothesisVIIViolation(HypothesisViolation):
    clause = "vii"


@dataclass
class GeneratorAction:
    generator: GroupElement
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    edge_restriction: dict[str, GroupElement]


@dataclass(frozen=True)
class Truncated:
    size: int


@dataclass(frozen=True)
class PseudoFreeWitness:
    g: GroupElement
    edge: str


@dataclass(frozen=True)
class NoWitness:
    radius: int


@dataclass(frozen=True)
class Decided:
    value: bool


class SelfSimilarAction:
    def __init__(self, graph: KGraph, group: Group, generators: list[GeneratorAction]):
        self.graph = graph
        self.group = group
        self.generators = {ga.generator.value: ga for ga in generators}
        self._edge_memo: dict[tuple, tuple[str, GroupElement]] = {}
        self._inverse_edge: dict = {}
        self._inverse_vertex: dict = {}
        for s, ga in self.generators.items():
            self._inverse_vertex[s] = {w: v for v, w in ga.vertex_map.items()}
            self._inverse_edge[s] = {f: e for e, f in ga.edge_map.items()}
        self._pf_verdict = None

    # letters are (generator value, +1/-1)
    def _letter_vertex(self, letter, v: str) -> str:
        s, sign = letter
        if sign > 0:
            return self.generators[s].vertex_map[v]
        return self._inverse_vertex[s][v]

    def _letter_edge(self, letter, e: str) -> tuple[str, GroupElement]:
        s, sign = letter
        ga = self.generators[s]
        if sign > 0:
            return ga.edge_map[e], ga.edge_restriction[e]
        pre = self._inverse_edge[s][e]
        return pre, ga.edge_restriction[pre].inverse()

    def _letters(self, g: GroupElement):
        for s, sign in self.group.word_values(g.value):
            if s not in self.generators:
                raise MixedStructures(f"no action data for generator {self.group.format(s)}")
            yield (s, sign)

    def _check(self, g):
        if not isinstance(g, GroupElement) or g.group is not self.group:
            raise MixedStructures(f"{g!r} is not an element of {self.group.name}")

    def act_vertex(self, g: GroupElement, v: str) -> str:
        self._check(g)
        for letter in reversed(list(self._letters(g))):
            v = self._letter_vertex(letter, v)
        return v

    def act_edge(self, g: GroupElement, e: str) -> tuple[str, GroupElement]:
        """(g.e, g|_e) for a single edge."""
        key = (g.value, e)
        hit = self._edge_memo.get(key)
        if hit is not None:
            return hit
        self._check(g)
        cur, res = e, self.group.identity
        for letter in reversed(list(self._letters(g))):
            cur, r = self._letter_edge(letter, cur)
            res = r * res
        self._edge_memo[key] = (cur, res)
        return cur, res

    def act_restrict(self, g: GroupElement, mu: Path) -> tuple[Path, GroupElement]:
        if mu.range not in self.graph.vertices:
            raise MixedStructures(f"{mu} is not a path of this graph")
        rng = self.act_vertex(g, mu.range)
        out = []
        h = g
        for e in mu.word:
            f, h = self.act_edge(h, e)
            out.append(f)
        return Path(rng, tuple(out)), h

    def act(self, g: GroupElement, mu: Path) -> Path:
        return self.act_restrict(g, mu)[0]

    def restrict(self, g: GroupElement, mu: Path) -> GroupElement:
        self._check(g)
        return self.act_restrict(g, mu)[1]

    def restriction_closure(self, max_size: int | None = None, include_inverses: bool = True):
        """Smallest set holding the generators (and their inverses) that is
        closed under g -> g|_e for every edge e, or Truncated."""
        cap = max_closure() if max_size is None else max_size
        start = [self.group.wrap(s) for s in self.generators]
        if include_inverses:
            start += [g.inverse() for g in start]
        if not start:
            start = [self.group.identity]
        seen = set(start)
        stack = list(seen)
        edges = sorted(self.graph.edges)
        while stack:
            g = stack.pop()
            for e in edges:
                h = self.act_edge(g, e)[1]
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        return Truncated(len(seen))
                    stack.append(h)
        return frozenset(seen)

    def pseudo_free_check(self, ball_radius: int = 6):
        """Search for g != 1 fixing an edge with trivial restriction there."""
        if isinstance(self.group, FiniteGroup):
            candidates = [self.group.wrap(x) for x in self.group.elements]
        else:
            candidates = self.group.enumerate_ball(ball_radius)
        for g in sorted(candidates):
            if g.is_identity():
                continue
            for e in sorted(self.graph.edges):
                f, r = self.act_edge(g, e)
                if f == e and r.is_identity():
                    return PseudoFreeWitness(g, e)
        if isinstance(self.group, FiniteGroup):
            return Decided(True)
        return NoWitness(ball_radius)

    def pseudo_free_verdict(self):
        if self._pf_verdict is None:
            self._pf_verdict = self.pseudo_free_check()
        return self._pf_verdict

    def orbit(self, v: str) -> set[str]:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for s in self.generators:
                for sign in (1, -1):
                    w = self._letter_vertex((s, sign), u)
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return seen


def _reachable(graph: KGraph, v: str) -> set[str]:
    """Sources of all paths with range v."""
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for e in graph.edges.values():
            if e.range == u and e.source not in seen:
                seen.add(e.source)
                stack.append(e.source)
    return seen


def validate_action(graph: KGraph, group: Group, generators: list[GeneratorAction]) -> SelfSimilarAction:
    verts = set(graph.vertices)
    edges = graph.edges
    seen_gens = set()
    for ga in generators:
        g = ga.generator
        if g.group is not group:
            raise MixedStructures(f"generator {g!r} is not in {group.name}")
        if g.value in seen_gens:
            raise ValidationError(f"generator {g} given twice")
        seen_gens.add(g.value)
        if set(ga.vertex_map) != verts or set(ga.vertex_map.values()) != verts:
            raise HypothesisIViolation(f"generator {g}: vertex map is not a bijection", g)
        if set(ga.edge_map) != set(edges) or set(ga.edge_map.values()) != set(edges):
            raise HypothesisIViolation(f"generator {g}: edge map is not a bijection", g)
        if set(ga.edge_restriction) != set(edges):
            raise HypothesisIViolation(f"generator {g}: restriction missing on some edge", g)
        for e, f in ga.edge_map.items():
            r = ga.edge_restriction[e]
            if not isinstance(r, GroupElement) or r.group is not group:
                raise MixedStructures(f"restriction {r!r} is not in {group.name}")
            if edges[e].color != edges[f].color:
                raise HypothesisIViolation(f"{g}.{e} = {f} changes colour", (g, e))
            if ga.vertex_map[edges[e].range] != edges[f].range:
                raise HypothesisIIViolation(f"r({g}.{e}) != {g}.r({e})", (g, e))
            if ga.vertex_map[edges[e].source] != edges[f].source:
                raise HypothesisIIViolation(f"s({g}.{e}) != {g}.s({e})", (g, e))
    missing = [s for s in group.generator_values() if s not in seen_gens]
    if missing:
        raise ValidationError(f"no action data for generators {[group.format(s) for s in missing]}")

    act = SelfSimilarAction(graph, group, generators)
    letters = [(s, sign) for s in act.generators for sign in (1, -1)]

    def letter_elem(letter):
        g = group.wrap(letter[0])
        return g if letter[1] > 0 else g.inverse()

    reach = {v: _reachable(graph, v) for v in graph.vertices}
    for letter in letters:
        g = letter_elem(letter)
        for e in sorted(edges):
            _, r = act.act_edge(g, e)
            for w in sorted(reach[edges[e].source]):
                if act.act_vertex(r, w) != act.act_vertex(g, w):
                    raise HypothesisIIIViolation(f"{g}|_{e} . {w} != {g} . {w}", (g, e, w))

    for letter in letters:
        g = letter_elem(letter)
        for (e, f), (f2, e2) in sorted(graph.squares.items()):
            left, lr = act.act_restrict(g, Path(edges[e].range, (e, f)))
            right_edges = []
            h = g
            for x in (f2, e2):
                y, h = act.act_edge(h, x)
                right_edges.append(y)
            right = Path(left.range, graph.normal_form(tuple(right_edges)))
            left = Path(left.range, graph.normal_form(left.word))
            if left != right:
                raise HypothesisIVViolation(
                    f"square {e}.{f} = {f2}.{e2}: {g} sends the sides to {left} and {right}",
                    (g, e, f))
            if lr != h:
                raise HypothesisVIViolation(
                    f"square {e}.{f} = {f2}.{e2}: restrictions of {g} are {lr} and {h}", (g, e, f))

    # clause (v), g|_v = g, holds by construction of act_restrict on vertex paths

    # (vii): the letter-by-letter action must respect the group relations
    pairs = [(letter_elem(a), letter_elem(b)) for a in letters for b in letters]
    if isinstance(group, FiniteGroup):
        pairs += [(letter_elem(a), group.wrap(h)) for a in letters for h in group.elements]
    for g, h in pairs:
        gh = g * h
        for v in graph.vertices:
            if act.act_vertex(gh, v) != act.act_vertex(g, act.act_vertex(h, v)):
                raise HypothesisVIIViolation(f"({g}{h}).{v} differs from {g}.({h}.{v})", (g, h, v))
        for e in sorted(edges):
            he, hr = act.act_edge(h, e)
            ghe, gr = act.act_edge(g, he)
            if act.act_edge(gh, e) != (ghe, gr * hr):
                raise HypothesisVIIViolation(f"cocycle fails for {g}, {h} on {e}", (g, h, e))
    return act


def action_from_table(graph: KGraph, group: Group,
                      data: Mapping[str, Mapping[str, Mapping]]) -> SelfSimilarAction:
    """Convenience builder: ``data[gen] = {"vertices": {v: w}, "edges": {e: (f, restriction)}}``
    with group elements written as strings."""
    gens = []
    for g, descriptor in data.items():
        vm = dict(descriptor.get("vertices") or {v: v for v in graph.vertices})
        em = {e: f for e, (f, _) in descriptor["edges"].items()}
        rm = {e: group.parse(r) for e, (_, r) in descriptor["edges"].items()}
        gens.append(GeneratorAction(group.parse(g), vm, em, rm))
    return validate_action(graph, group, gens)
